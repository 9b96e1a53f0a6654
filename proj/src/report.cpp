/*
 * Copyright 2026 The CLE Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "cle/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

namespace cle {

namespace {

std::string escape(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  for (char c : text) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

std::string number(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4g", v);
  return buf;
}

double peak(const std::vector<double>& weights) {
  double m = 0;
  for (double w : weights) m = std::max(m, std::abs(w));
  return m;
}

// rgba() fill for a signed weight.
std::string fill(double weight, double scale, double max_alpha) {
  const double alpha = scale > 0 ? std::min(max_alpha, max_alpha * std::abs(weight) / scale) : 0.0;
  char buf[64];
  std::snprintf(buf, sizeof buf, "rgba(%s,%.3f)", weight >= 0 ? "0,160,0" : "200,0,0", alpha);
  return buf;
}

std::string hex_color(std::uint8_t r, std::uint8_t g, std::uint8_t b) {
  char buf[8];
  std::snprintf(buf, sizeof buf, "#%02x%02x%02x", r, g, b);
  return buf;
}

std::string text_body(const std::string& text, const BinaryRepr& repr, const std::vector<double>& w) {
  std::vector<int> owner(text.size(), -1);
  for (const FeatureUnit& unit : repr.units) {
    if (w[unit.index] == 0.0) continue;
    for (const TokenSpan& span : std::get<WordPayload>(unit.payload).spans) {
      for (std::size_t c = span.begin; c < span.begin + span.length && c < text.size(); ++c) {
        owner[c] = unit.index;
      }
    }
  }
  const double scale = peak(w);
  std::string out = "<p class=\"doc\">";
  std::size_t i = 0;
  while (i < text.size()) {
    std::size_t j = i;
    while (j < text.size() && owner[j] == owner[i]) ++j;
    const std::string piece = escape(std::string_view(text).substr(i, j - i));
    if (owner[i] < 0) {
      out += piece;
    } else {
      out += "<span style=\"background:" + fill(w[owner[i]], scale, 0.85) + "\" title=\"" +
             number(w[owner[i]]) + "\">" + piece + "</span>";
    }
    i = j;
  }
  return out + "</p>\n";
}

std::string tabular_body(const BinaryRepr& repr, const std::vector<double>& w) {
  const double scale = peak(w);
  std::string out = "<table class=\"bars\">\n";
  for (const FeatureUnit& unit : repr.units) {
    const double width = scale > 0 ? 200.0 * std::abs(w[unit.index]) / scale : 0.0;
    out += "<tr><td>" + escape(unit.label) + "</td><td><div style=\"width:" + number(width) +
           "px;height:12px;background:" + (w[unit.index] >= 0 ? "#00a000" : "#c80000") +
           "\"></div></td><td>" + number(w[unit.index]) + "</td></tr>\n";
  }
  return out + "</table>\n";
}

}  // namespace

std::vector<double> feature_weights(const Explanation& e, int dim) {
  std::vector<double> w(static_cast<std::size_t>(std::max(dim, 0)), 0.0);
  for (const Term& t : e.terms) {
    if (t.kind != Term::Kind::kSingle || t.indices.empty() || t.indices[0] >= dim) continue;
    w[t.indices[0]] = t.coefficient ? *t.coefficient : 1.0;
  }
  return w;
}

std::string render_segment_svg(const Image& image, const SegmentMap& segments,
                               const std::vector<double>& weights) {
  std::ostringstream out;
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << image.width << "\" height=\""
      << image.height << "\" viewBox=\"0 0 " << image.width << ' ' << image.height
      << "\" shape-rendering=\"crispEdges\">\n";
  // Base image as horizontal runs of equal colour.
  for (int y = 0; y < image.height; ++y) {
    int x = 0;
    while (x < image.width) {
      int end = x + 1;
      while (end < image.width && image.at(end, y, 0) == image.at(x, y, 0) &&
             image.at(end, y, 1) == image.at(x, y, 1) && image.at(end, y, 2) == image.at(x, y, 2)) {
        ++end;
      }
      out << "<rect x=\"" << x << "\" y=\"" << y << "\" width=\"" << end - x << "\" height=\"1\" fill=\""
          << hex_color(image.at(x, y, 0), image.at(x, y, 1), image.at(x, y, 2)) << "\"/>\n";
      x = end;
    }
  }
  const double scale = peak(weights);
  for (int s = 0; s < segments.segment_count; ++s) {
    const double w = s < static_cast<int>(weights.size()) ? weights[s] : 0.0;
    if (w == 0.0) continue;
    out << "<g fill=\"" << fill(w, scale, 0.7) << "\"><title>segment " << s << ": " << number(w) << "</title>\n";
    for (int y = 0; y < segments.height; ++y) {
      int x = 0;
      while (x < segments.width) {
        if (segments.at(x, y) != s) {
          ++x;
          continue;
        }
        int end = x + 1;
        while (end < segments.width && segments.at(end, y) == s) ++end;
        out << "<rect x=\"" << x << "\" y=\"" << y << "\" width=\"" << end - x << "\" height=\"1\"/>\n";
        x = end;
      }
    }
    out << "</g>\n";
  }
  out << "</svg>\n";
  return out.str();
}

std::string render_report_html(const Explanation& e, const InterpretableInstance& instance) {
  const BinaryRepr& repr = instance.repr();
  const std::vector<double> w = feature_weights(e, repr.dim());
  std::ostringstream out;
  out << "<!DOCTYPE html>\n<html><head><meta charset=\"utf-8\"><title>" << escape(method_name(e.method))
      << " explanation</title>\n<style>body{font-family:sans-serif;max-width:60em;margin:2em auto}"
         ".doc{line-height:1.8}table{border-collapse:collapse}td,th{padding:2px 8px;text-align:left}"
         "</style></head><body>\n";
  out << "<h1>" << escape(method_name(e.method)) << " explanation</h1>\n<p>Instance "
      << escape(e.instance_ref) << ", class <b>" << escape(e.explained_class_name) << "</b>";
  if (e.black_box_prediction) out << ", model probability " << number(*e.black_box_prediction);
  if (e.local_prediction) out << ", local prediction " << number(*e.local_prediction);
  if (e.r2) out << ", R&sup2; " << number(*e.r2);
  out << ".</p>\n";

  switch (instance.modality()) {
    case Modality::kText: out << text_body(std::get<std::string>(instance.original()), repr, w); break;
    case Modality::kTabular: out << tabular_body(repr, w); break;
    case Modality::kImage:
      out << render_segment_svg(std::get<Image>(instance.original()), instance.segments(), w);
      break;
  }

  out << "<h2>Terms</h2>\n<table>\n<tr><th>#</th><th>term</th><th>kind</th><th>weight</th></tr>\n";
  int row = 0;
  for (const Term& t : e.terms) {
    const double shown = t.coefficient.value_or(0.0);
    out << "<tr><td>" << (t.rank ? *t.rank : ++row) << "</td><td style=\"background:"
        << (t.coefficient ? fill(shown, peak(w) > 0 ? peak(w) : std::abs(shown), 0.6) : "transparent")
        << "\">" << escape(t.label) << "</td><td>" << (t.kind == Term::Kind::kSingle ? "single" : "combo")
        << "</td><td>" << (t.coefficient ? number(*t.coefficient) : "&ndash;") << "</td></tr>\n";
  }
  out << "</table>\n";
  if (e.intercept) out << "<p>Intercept " << number(*e.intercept) << "</p>\n";
  out << "</body></html>\n";
  return out.str();
}

}  // namespace cle
