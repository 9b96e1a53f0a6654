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

#include "cle/explanation_json.hpp"

#include "cle/error.hpp"

namespace cle {

namespace {

using nlohmann::json;

const char* metric_name(DistanceMetric metric) {
  return metric == DistanceMetric::kCosine ? "cosine" : "euclidean-normalized";
}

DistanceMetric parse_metric(const std::string& name) {
  if (name == "cosine") return DistanceMetric::kCosine;
  if (name == "euclidean-normalized") return DistanceMetric::kEuclideanNormalized;
  throw Error(ErrorCode::kConfigError, "unknown distance metric '" + name + "'");
}

template <typename T>
void put_optional(json& doc, const char* key, const std::optional<T>& value) {
  if (value) doc[key] = *value;
}

template <typename T>
std::optional<T> get_optional(const json& doc, const char* key) {
  if (!doc.contains(key) || doc[key].is_null()) return std::nullopt;
  return doc[key].get<T>();
}

}  // namespace

json config_to_json(const ExplainConfig& cfg) {
  json doc{{"n_samples", cfg.n_samples},
           {"k", cfg.k},
           {"seed", cfg.seed},
           {"batch_size", cfg.batch_size},
           {"spans", cfg.combination.spans}};
  if (cfg.kernel) {
    doc["sigma"] = cfg.kernel->sigma;
    doc["metric"] = metric_name(cfg.kernel->metric);
  }
  put_optional(doc, "focus", cfg.combination.focus);
  put_optional(doc, "explained_class", cfg.explained_class);
  return doc;
}

json explanation_to_json(const Explanation& e, bool include_timings) {
  json terms = json::array();
  for (const Term& t : e.terms) {
    json term{{"kind", t.kind == Term::Kind::kSingle ? "single" : "combo"},
              {"indices", t.indices},
              {"label", t.label}};
    put_optional(term, "coefficient", t.coefficient);
    put_optional(term, "rank", t.rank);
    terms.push_back(std::move(term));
  }
  json doc{{"method", method_name(e.method)},
           {"instance_ref", e.instance_ref},
           {"explained_class", e.explained_class},
           {"explained_class_label", e.explained_class_name},
           {"dim", e.dim},
           {"terms", std::move(terms)},
           {"black_box_prediction", e.black_box_prediction ? json(*e.black_box_prediction) : json()},
           {"seed", e.config.seed},
           {"config", config_to_json(e.config)}};
  put_optional(doc, "intercept", e.intercept);
  put_optional(doc, "local_prediction", e.local_prediction);
  put_optional(doc, "fidelity_error", e.fidelity_error);
  put_optional(doc, "r2", e.r2);
  if (e.degenerate) doc["degenerate"] = true;
  if (!e.converged) doc["converged"] = false;
  if (!e.warnings.empty()) doc["warnings"] = e.warnings;
  if (include_timings) {
    doc["timings"] = {{"perturb", e.timings.perturb},
                      {"predict", e.timings.predict},
                      {"extend", e.timings.extend},
                      {"fit", e.timings.fit}};
  }
  return doc;
}

Explanation explanation_from_json(const json& doc) {
  Explanation e;
  e.method = parse_method(doc.at("method").get<std::string>());
  e.instance_ref = doc.at("instance_ref").get<std::string>();
  e.explained_class = doc.at("explained_class").get<int>();
  e.explained_class_name = doc.value("explained_class_label", std::string());
  e.dim = doc.value("dim", 0);
  for (const json& t : doc.at("terms")) {
    Term term;
    term.kind = t.at("kind").get<std::string>() == "combo" ? Term::Kind::kCombo : Term::Kind::kSingle;
    term.indices = t.at("indices").get<std::vector<int>>();
    term.label = t.at("label").get<std::string>();
    term.coefficient = get_optional<double>(t, "coefficient");
    term.rank = get_optional<int>(t, "rank");
    e.terms.push_back(std::move(term));
  }
  e.black_box_prediction = get_optional<double>(doc, "black_box_prediction");
  e.intercept = get_optional<double>(doc, "intercept");
  e.local_prediction = get_optional<double>(doc, "local_prediction");
  e.fidelity_error = get_optional<double>(doc, "fidelity_error");
  e.r2 = get_optional<double>(doc, "r2");
  e.degenerate = doc.value("degenerate", false);
  e.converged = doc.value("converged", true);
  if (doc.contains("warnings")) e.warnings = doc["warnings"].get<std::vector<std::string>>();
  e.config.seed = doc.value("seed", std::uint64_t{0});
  if (doc.contains("config")) {
    const json& c = doc["config"];
    e.config.n_samples = c.value("n_samples", e.config.n_samples);
    e.config.k = c.value("k", e.config.k);
    e.config.batch_size = c.value("batch_size", e.config.batch_size);
    if (c.contains("spans")) e.config.combination.spans = c["spans"].get<std::vector<int>>();
    e.config.combination.focus = get_optional<std::vector<int>>(c, "focus");
    e.config.explained_class = get_optional<int>(c, "explained_class");
    if (c.contains("sigma")) {
      e.config.kernel = KernelConfig{c["sigma"].get<double>(),
                                     parse_metric(c.value("metric", std::string("cosine")))};
    }
  }
  if (doc.contains("timings")) {
    const json& t = doc["timings"];
    e.timings = {t.value("perturb", 0.0), t.value("predict", 0.0), t.value("extend", 0.0),
                 t.value("fit", 0.0)};
  }
  return e;
}

}  // namespace cle
