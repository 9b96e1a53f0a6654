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

#include "cle/tabular.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "cle/error.hpp"

namespace cle {

namespace {

std::string format_number(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buffer[32];
  std::snprintf(buffer, sizeof(buffer), "%.6g", v);
  return buffer;
}

std::optional<double> parse_number(std::string_view text) {
  while (!text.empty() && text.front() == ' ') text.remove_prefix(1);
  while (!text.empty() && text.back() == ' ') text.remove_suffix(1);
  if (text.empty()) return std::nullopt;
  if (text.front() == '+') text.remove_prefix(1);
  double value = 0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size() || !std::isfinite(value)) {
    return std::nullopt;
  }
  return value;
}

std::string read_text(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIoError, "cannot open " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

}  // namespace

std::string ColumnSpec::bin_label(int bin) const {
  if (kind == ColumnKind::kCategorical) return name + "=" + categories.at(bin);
  const double lo = bin == 0 ? -INFINITY : edges.at(bin - 1);
  const double hi = bin == static_cast<int>(edges.size()) ? INFINITY : edges.at(bin);
  std::string label = name + " ∈ ";
  label += lo == -INFINITY ? "(" : "[";
  label += format_number(lo) + ", " + format_number(hi) + ")";
  return label;
}

int TabularSchema::column_index(const std::string& name) const {
  for (std::size_t i = 0; i < columns.size(); ++i) {
    if (columns[i].name == name) return static_cast<int>(i);
  }
  return -1;
}

double quantile_sorted(const std::vector<double>& sorted, double q) {
  if (sorted.empty()) throw Error(ErrorCode::kMissingContext, "empty sample");
  const double pos = (static_cast<double>(sorted.size()) - 1.0) * q;
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
  const double frac = pos - static_cast<double>(lo);
  return sorted[lo] + (sorted[hi] - sorted[lo]) * frac;
}

std::vector<double> quartile_edges(std::vector<double> sample) {
  std::sort(sample.begin(), sample.end());
  std::vector<double> edges;
  for (double q : {0.25, 0.5, 0.75}) {
    const double e = quantile_sorted(sample, q);
    if (edges.empty() || e > edges.back()) edges.push_back(e);
  }
  return edges;
}

BinAssignment assign_bin(const ColumnSpec& column, const TabularValue& value) {
  if (column.kind == ColumnKind::kCategorical) {
    const std::string text = format_value(value);
    const auto it = std::find(column.categories.begin(), column.categories.end(), text);
    if (it == column.categories.end()) {
      throw Error(ErrorCode::kSchemaMismatch,
                  "unknown category '" + text + "' in column " + column.name);
    }
    return {static_cast<int>(it - column.categories.begin()), false};
  }
  const double* number = std::get_if<double>(&value);
  if (number == nullptr) {
    throw Error(ErrorCode::kSchemaMismatch, "non-numeric value in column " + column.name);
  }
  BinAssignment out;
  out.bin = static_cast<int>(
      std::upper_bound(column.edges.begin(), column.edges.end(), *number) -
      column.edges.begin());
  if (column.range && (*number < column.range->first || *number > column.range->second)) {
    out.out_of_range = true;
  }
  return out;
}

TabularSchema infer_schema(const std::vector<std::string>& header,
                           const std::vector<TabularRow>& rows) {
  TabularSchema schema;
  for (std::size_t c = 0; c < header.size(); ++c) {
    ColumnSpec column;
    column.name = header[c];
    std::vector<double> numbers;
    bool numeric = true;
    for (const auto& row : rows) {
      if (const double* v = std::get_if<double>(&row.values.at(c))) {
        numbers.push_back(*v);
      } else {
        numeric = false;
        break;
      }
    }
    if (numeric && !numbers.empty()) {
      column.kind = ColumnKind::kNumeric;
      column.edges = quartile_edges(numbers);
      const auto [mn, mx] = std::minmax_element(numbers.begin(), numbers.end());
      column.range = std::make_pair(*mn, *mx);
    } else {
      column.kind = ColumnKind::kCategorical;
      for (const auto& row : rows) {
        const std::string v = format_value(row.values.at(c));
        if (std::find(column.categories.begin(), column.categories.end(), v) ==
            column.categories.end()) {
          column.categories.push_back(v);
        }
      }
      std::sort(column.categories.begin(), column.categories.end());
    }
    schema.columns.push_back(std::move(column));
  }
  return schema;
}

nlohmann::json schema_to_json(const TabularSchema& schema) {
  nlohmann::json columns = nlohmann::json::array();
  for (const auto& column : schema.columns) {
    nlohmann::json c;
    c["name"] = column.name;
    if (column.kind == ColumnKind::kNumeric) {
      c["kind"] = "numeric";
      c["edges"] = column.edges;
      if (column.range) c["range"] = {column.range->first, column.range->second};
    } else {
      c["kind"] = "categorical";
      c["categories"] = column.categories;
    }
    columns.push_back(std::move(c));
  }
  return {{"columns", std::move(columns)}};
}

TabularSchema schema_from_json(const nlohmann::json& doc) {
  TabularSchema schema;
  try {
    for (const auto& c : doc.at("columns")) {
      ColumnSpec column;
      column.name = c.at("name").get<std::string>();
      const std::string kind = c.at("kind").get<std::string>();
      if (kind == "numeric") {
        column.kind = ColumnKind::kNumeric;
        column.edges = c.at("edges").get<std::vector<double>>();
        for (std::size_t i = 1; i < column.edges.size(); ++i) {
          if (!(column.edges[i] > column.edges[i - 1])) {
            throw Error(ErrorCode::kSchemaMismatch,
                        "edges of column " + column.name + " not strictly increasing");
          }
        }
        if (c.contains("range")) {
          const auto r = c.at("range").get<std::vector<double>>();
          if (r.size() != 2) throw Error(ErrorCode::kSchemaMismatch, "range needs two values");
          column.range = std::make_pair(r[0], r[1]);
        }
      } else if (kind == "categorical") {
        column.kind = ColumnKind::kCategorical;
        column.categories = c.at("categories").get<std::vector<std::string>>();
        if (column.categories.empty()) {
          throw Error(ErrorCode::kSchemaMismatch, "column " + column.name + " has no categories");
        }
      } else {
        throw Error(ErrorCode::kSchemaMismatch, "unknown column kind " + kind);
      }
      schema.columns.push_back(std::move(column));
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kSchemaMismatch, e.what());
  }
  return schema;
}

TabularSchema read_schema(const std::filesystem::path& path) {
  try {
    return schema_from_json(nlohmann::json::parse(read_text(path)));
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kSchemaMismatch, e.what());
  }
}

CsvTable parse_csv(std::string_view text) {
  std::vector<std::vector<std::string>> records;
  std::vector<std::string> record;
  std::string field;
  bool quoted = false;
  bool any = false;
  for (std::size_t i = 0; i < text.size(); ++i) {
    const char ch = text[i];
    if (quoted) {
      if (ch == '"') {
        if (i + 1 < text.size() && text[i + 1] == '"') {
          field += '"';
          ++i;
        } else {
          quoted = false;
        }
      } else {
        field += ch;
      }
      continue;
    }
    if (ch == '"') {
      quoted = true;
      any = true;
    } else if (ch == ',') {
      record.push_back(std::move(field));
      field.clear();
      any = true;
    } else if (ch == '\n' || ch == '\r') {
      if (ch == '\r' && i + 1 < text.size() && text[i + 1] == '\n') ++i;
      if (any || !field.empty()) {
        record.push_back(std::move(field));
        records.push_back(std::move(record));
      }
      field.clear();
      record.clear();
      any = false;
    } else {
      field += ch;
      any = true;
    }
  }
  if (any || !field.empty()) {
    record.push_back(std::move(field));
    records.push_back(std::move(record));
  }
  if (records.empty()) throw Error(ErrorCode::kIoError, "empty CSV");
  CsvTable table;
  table.header = std::move(records.front());
  table.rows.assign(std::make_move_iterator(records.begin() + 1),
                    std::make_move_iterator(records.end()));
  return table;
}

CsvTable read_csv(const std::filesystem::path& path) { return parse_csv(read_text(path)); }

TabularRow typed_row(const TabularSchema& schema, const std::vector<std::string>& header,
                     const std::vector<std::string>& cells) {
  if (header.size() != schema.columns.size() || cells.size() != header.size()) {
    throw Error(ErrorCode::kSchemaMismatch, "row has " + std::to_string(cells.size()) +
                                                " cells, schema has " +
                                                std::to_string(schema.columns.size()));
  }
  TabularRow row;
  row.values.resize(schema.columns.size());
  for (std::size_t i = 0; i < header.size(); ++i) {
    const int c = schema.column_index(header[i]);
    if (c < 0) throw Error(ErrorCode::kSchemaMismatch, "unknown column " + header[i]);
    if (schema.columns[c].kind == ColumnKind::kNumeric) {
      const auto number = parse_number(cells[i]);
      if (!number) {
        throw Error(ErrorCode::kSchemaMismatch,
                    "column " + header[i] + " expects a number, got '" + cells[i] + "'");
      }
      row.values[c] = *number;
    } else {
      row.values[c] = cells[i];
    }
  }
  return row;
}

std::string format_value(const TabularValue& value) {
  if (const auto* s = std::get_if<std::string>(&value)) return *s;
  return format_number(std::get<double>(value));
}

TabularContext::TabularContext(TabularSchema s, const std::vector<TabularRow>& training)
    : schema(std::move(s)) {
  values_by_bin.resize(schema.columns.size());
  for (std::size_t c = 0; c < schema.columns.size(); ++c) {
    values_by_bin[c].resize(schema.columns[c].bin_count());
  }
  for (const auto& row : training) {
    if (row.values.size() != schema.columns.size()) {
      throw Error(ErrorCode::kSchemaMismatch, "training row width mismatch");
    }
    for (std::size_t c = 0; c < schema.columns.size(); ++c) {
      const int bin = assign_bin(schema.columns[c], row.values[c]).bin;
      values_by_bin[c][bin].push_back(row.values[c]);
    }
  }
}

}  // namespace cle
