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

#include "cle/eval.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <numeric>
#include <sstream>

#include "cle/error.hpp"

namespace cle {

namespace {

using nlohmann::json;

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

const char* split_name(Split split) {
  switch (split) {
    case Split::kTrain: return "train";
    case Split::kValidation: return "validation";
    case Split::kTest: return "test";
  }
  return "?";
}

std::vector<int> argmax_rows(const Eigen::MatrixXd& probs) {
  std::vector<int> out(static_cast<std::size_t>(probs.rows()));
  for (Eigen::Index i = 0; i < probs.rows(); ++i) {
    Eigen::Index best = 0;
    for (Eigen::Index c = 1; c < probs.cols(); ++c) {
      if (probs(i, c) > probs(i, best)) best = c;
    }
    out[static_cast<std::size_t>(i)] = static_cast<int>(best);
  }
  return out;
}

std::vector<int> predicted_classes(const BlackBoxModel& model,
                                   std::span<const InterpretableInstance> instances) {
  std::vector<Instance> raw;
  raw.reserve(instances.size());
  for (const auto& inst : instances) raw.push_back(inst.original());
  return argmax_rows(predict_batched(model, raw));
}

// Argmax after switching off every unit whose key is in `removed`. Instances
// without such a unit keep `original`.
std::vector<int> classes_after_removal(const BlackBoxModel& model,
                                       std::span<const InterpretableInstance> instances,
                                       const std::vector<int>& original,
                                       const std::set<std::string>& removed, std::uint64_t seed) {
  std::vector<int> out = original;
  if (removed.empty()) return out;
  std::vector<Instance> raw;
  std::vector<std::size_t> which;
  for (std::size_t i = 0; i < instances.size(); ++i) {
    Bits bits = instances[i].repr().bits;
    bool touched = false;
    for (const FeatureUnit& unit : instances[i].repr().units) {
      if (removed.count(unit.key) != 0) {
        bits[unit.index] = 0;
        touched = true;
      }
    }
    if (!touched) continue;
    raw.push_back(instances[i].reconstruct(bits, mix_seed(seed, i)));
    which.push_back(i);
  }
  if (raw.empty()) return out;
  const std::vector<int> after = argmax_rows(predict_batched(model, raw));
  for (std::size_t t = 0; t < which.size(); ++t) out[which[t]] = after[t];
  return out;
}

std::set<std::string> keys_of(const Explanation& e, const BinaryRepr& repr,
                              const std::vector<std::string>& candidates) {
  std::set<std::string> out;
  for (int j : flagged_features(e)) {
    const std::string& key = repr.units[j].key;
    if (std::find(candidates.begin(), candidates.end(), key) != candidates.end()) out.insert(key);
  }
  return out;
}

json mean_se_json(const MeanSe& m) {
  return {{"mean", m.count > 0 ? json(m.mean) : json()},
          {"se", m.count > 0 ? json(m.se) : json()},
          {"n", m.count}};
}

std::string fmt(double v) {
  if (std::isnan(v)) return "";
  std::ostringstream out;
  out << std::setprecision(6) << v;
  return out.str();
}

std::string fmt(const MeanSe& m, bool mean) {
  return m.count > 0 ? fmt(mean ? m.mean : m.se) : "";
}

}  // namespace

MeanSe summarize(const std::vector<double>& values) {
  MeanSe out;
  double sum = 0;
  for (double v : values) {
    if (std::isnan(v)) continue;
    sum += v;
    ++out.count;
  }
  if (out.count == 0) return out;
  out.mean = sum / out.count;
  if (out.count > 1) {
    double sq = 0;
    for (double v : values) {
      if (!std::isnan(v)) sq += (v - out.mean) * (v - out.mean);
    }
    out.se = std::sqrt(sq / (out.count - 1)) / std::sqrt(static_cast<double>(out.count));
  }
  return out;
}

std::shared_ptr<const TabularContext> training_context(const SparseDataset& dataset) {
  if (dataset.modality != Modality::kTabular || !dataset.schema) return nullptr;
  std::vector<TabularRow> rows;
  for (std::size_t i : dataset.indices(Split::kTrain)) {
    rows.push_back(std::get<TabularRow>(dataset.instances[i]));
  }
  return std::make_shared<const TabularContext>(*dataset.schema, rows);
}

std::vector<InterpretableInstance> interpretable_instances(
    const SparseDataset& dataset, Split split, std::shared_ptr<const TabularContext> context,
    std::size_t limit) {
  std::vector<InterpretableInstance> out;
  for (std::size_t i : dataset.indices(split)) {
    if (limit > 0 && out.size() >= limit) break;
    std::string ref = std::string(split_name(split)) + ":" + std::to_string(i);
    if (dataset.modality == Modality::kText) {
      out.push_back(InterpretableInstance::from_text(std::get<std::string>(dataset.instances[i]),
                                                     std::move(ref)));
    } else if (dataset.modality == Modality::kTabular) {
      if (!context) context = training_context(dataset);
      out.push_back(InterpretableInstance::from_tabular(std::get<TabularRow>(dataset.instances[i]),
                                                        context, std::move(ref)));
    } else {
      throw Error(ErrorCode::kUnsupported, "image datasets need explicit segment maps");
    }
  }
  return out;
}

std::vector<Explanation> explain_methods(std::span<const Method> methods,
                                         const InterpretableInstance& instance,
                                         const BlackBoxModel& model, const ExplainConfig& cfg) {
  std::optional<Neighborhood> hood;
  std::vector<Explanation> out;
  for (Method m : methods) {
    if (m == Method::kLime || m == Method::kCle) {
      if (!hood) hood = sample_neighborhood(instance, model, cfg);
      out.push_back(m == Method::kLime ? explain_lime(instance, *hood, cfg)
                                       : explain_cle(instance, *hood, cfg));
    } else {
      out.push_back(explain(m, instance, model, cfg));
    }
  }
  return out;
}

std::vector<int> explained_features(const Explanation& e) {
  std::set<int> out;
  for (const Term& t : e.terms) out.insert(t.indices.begin(), t.indices.end());
  return {out.begin(), out.end()};
}

std::vector<int> flagged_features(const Explanation& e) {
  std::set<int> out;
  for (const Term& t : e.terms) {
    if (e.method == Method::kGreedy && t.coefficient && *t.coefficient == 0.0) continue;
    out.insert(t.indices.begin(), t.indices.end());
  }
  return {out.begin(), out.end()};
}

double gold_recall(const Explanation& e, const BinaryRepr& repr,
                   const std::set<std::string>& gold_keys) {
  std::set<int> present;
  for (const FeatureUnit& unit : repr.units) {
    if (repr.bits[unit.index] != 0 && gold_keys.count(unit.key) != 0) present.insert(unit.index);
  }
  if (present.empty()) return kNaN;
  int hit = 0;
  for (int j : explained_features(e)) hit += static_cast<int>(present.count(j));
  return static_cast<double>(hit) / static_cast<double>(present.size());
}

FaithfulnessResult eval_faithfulness(const BlackBoxModel& model,
                                     std::span<const InterpretableInstance> instances,
                                     std::span<const Method> methods, const ExplainConfig& cfg,
                                     const std::optional<std::set<std::string>>& gold_keys) {
  FaithfulnessResult result;
  result.methods.assign(methods.begin(), methods.end());
  std::map<Method, std::vector<double>> recalls, errors;
  for (std::size_t i = 0; i < instances.size(); ++i) {
    ExplainConfig local = cfg;
    local.seed = mix_seed(cfg.seed, i);
    const std::vector<Explanation> explanations = explain_methods(methods, instances[i], model, local);
    for (const Explanation& e : explanations) {
      FaithfulnessRecord record;
      record.instance_ref = instances[i].ref();
      record.method = e.method;
      record.recall = gold_keys ? gold_recall(e, instances[i].repr(), *gold_keys) : kNaN;
      if (gold_keys) {
        for (const FeatureUnit& unit : instances[i].repr().units) {
          record.gold_present += static_cast<int>(gold_keys->count(unit.key));
        }
      }
      record.fidelity_error = e.fidelity_error;
      recalls[e.method].push_back(record.recall);
      if (e.fidelity_error) errors[e.method].push_back(*e.fidelity_error);
      result.records.push_back(std::move(record));
    }
  }
  for (Method m : methods) {
    result.recall[m] = summarize(recalls[m]);
    if (m == Method::kLime || m == Method::kCle) result.fidelity[m] = summarize(errors[m]);
  }
  return result;
}

double trust_f1(const std::vector<bool>& truth, const std::vector<bool>& judged) {
  int tp = 0, fp = 0, fn = 0;
  for (std::size_t i = 0; i < truth.size(); ++i) {
    if (judged[i] && truth[i]) ++tp;
    if (judged[i] && !truth[i]) ++fp;
    if (!judged[i] && truth[i]) ++fn;
  }
  const int denom = 2 * tp + fp + fn;
  return denom == 0 ? 1.0 : 2.0 * tp / denom;
}

TrustResult eval_trust(const BlackBoxModel& model, std::span<const InterpretableInstance> instances,
                       std::span<const Method> methods, const ExplainConfig& cfg,
                       const TrustOptions& options) {
  if (instances.empty()) throw Error(ErrorCode::kConfigError, "trust evaluation needs instances");
  const double fraction = options.unrelated_fraction.value_or(
      instances.front().modality() == Modality::kImage ? 0.10 : 0.25);
  if (fraction < 0 || fraction >= 1) {
    throw Error(ErrorCode::kConfigError, "unrelated fraction must lie in [0, 1)");
  }
  if (options.trials < 1) throw Error(ErrorCode::kConfigError, "trials must be positive");
  TrustResult result;
  result.methods.assign(methods.begin(), methods.end());
  result.instances = static_cast<int>(instances.size());

  // Explanations do not depend on which features are later called unrelated.
  std::vector<std::vector<Explanation>> explanations;
  std::set<std::string> key_set;
  for (std::size_t i = 0; i < instances.size(); ++i) {
    ExplainConfig local = cfg;
    local.seed = mix_seed(cfg.seed, i);
    explanations.push_back(explain_methods(methods, instances[i], model, local));
    for (const FeatureUnit& unit : instances[i].repr().units) key_set.insert(unit.key);
  }
  const std::vector<std::string> keys(key_set.begin(), key_set.end());
  const std::vector<int> original = predicted_classes(model, instances);

  std::map<Method, std::vector<double>> f1s;
  for (int t = 0; t < options.trials; ++t) {
    const std::uint64_t trial_seed = mix_seed(options.seed, static_cast<std::uint64_t>(t));
    Rng rng(trial_seed);
    std::vector<std::string> shuffled = keys;
    const auto count = static_cast<std::size_t>(std::llround(fraction * static_cast<double>(keys.size())));
    for (std::size_t s = 0; s < count; ++s) {
      std::uniform_int_distribution<std::size_t> pick(s, shuffled.size() - 1);
      std::swap(shuffled[s], shuffled[pick(rng)]);
    }
    const std::set<std::string> unrelated(shuffled.begin(), shuffled.begin() + static_cast<long>(count));

    const std::vector<int> after =
        classes_after_removal(model, instances, original, unrelated, mix_seed(trial_seed, 1));
    std::vector<bool> truth(instances.size());
    TrustTrial trial;
    trial.unrelated_keys = static_cast<int>(count);
    for (std::size_t i = 0; i < instances.size(); ++i) {
      truth[i] = after[i] == original[i];
      trial.untrustworthy += truth[i] ? 0 : 1;
    }
    for (std::size_t m = 0; m < methods.size(); ++m) {
      std::vector<bool> judged(instances.size());
      for (std::size_t i = 0; i < instances.size(); ++i) {
        const Explanation& e = explanations[i][m];
        const BinaryRepr& repr = instances[i].repr();
        const auto is_unrelated = [&](int j) { return unrelated.count(repr.units[j].key) != 0; };
        if (e.local_prediction) {
          const double removed = e.contribution([&](const Term& term) {
            return std::any_of(term.indices.begin(), term.indices.end(), is_unrelated);
          });
          const double before = *e.local_prediction;
          judged[i] = (before >= 0.5) == (before - removed >= 0.5);
        } else {
          const std::vector<int> flagged = flagged_features(e);
          judged[i] = std::none_of(flagged.begin(), flagged.end(), is_unrelated);
        }
      }
      trial.f1[methods[m]] = trust_f1(truth, judged);
      f1s[methods[m]].push_back(trial.f1[methods[m]]);
    }
    result.trials.push_back(std::move(trial));
  }
  for (Method m : methods) result.f1[m] = summarize(f1s[m]);
  return result;
}

NoisyDataset inject_noise(const SparseDataset& dataset, const NoiseOptions& options) {
  if (dataset.modality != Modality::kText) {
    throw Error(ErrorCode::kUnsupported, "noise injection is implemented for text datasets");
  }
  if (dataset.classes.size() != 2) {
    throw Error(ErrorCode::kConfigError, "noise injection needs a binary dataset");
  }
  NoisyDataset out;
  out.dataset = dataset;
  Rng rng(options.seed);
  std::bernoulli_distribution coin(0.5);
  for (int f = 0; f < options.n_features; ++f) {
    out.keys.push_back("noise" + std::to_string(f));
    out.high_class.push_back(coin(rng) ? 1 : 0);
  }
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (std::size_t i = 0; i < dataset.size(); ++i) {
    auto& doc = std::get<std::string>(out.dataset.instances[i]);
    const bool test = dataset.splits[i] == Split::kTest;
    for (int f = 0; f < options.n_features; ++f) {
      const double rate =
          !test && dataset.labels[i] == out.high_class[f] ? options.rate_high : options.rate_low;
      if (unit(rng) < rate) doc += " " + out.keys[f];
    }
  }
  return out;
}

double accuracy(const BlackBoxModel& model, const SparseDataset& dataset, Split split) {
  const std::vector<std::size_t> rows = dataset.indices(split);
  if (rows.empty()) return kNaN;
  std::vector<Instance> raw;
  for (std::size_t i : rows) raw.push_back(dataset.instances[i]);
  const std::vector<int> predicted = argmax_rows(predict_batched(model, raw));
  int correct = 0;
  for (std::size_t t = 0; t < rows.size(); ++t) correct += predicted[t] == dataset.labels[rows[t]];
  return static_cast<double>(correct) / static_cast<double>(rows.size());
}

NoisyDatasetPair generate_pair(const SparseDataset& base, const ModelChoiceOptions& options,
                               std::uint64_t seed) {
  NoiseOptions noise = options.noise;
  noise.seed = mix_seed(seed, 0x4015E);
  NoisyDatasetPair pair;
  pair.noisy = inject_noise(base, noise);
  const SparseDataset& data = pair.noisy.dataset;
  const Featurizer featurizer = Featurizer::fit(data);
  std::vector<SparseVec> rows;
  std::vector<int> labels;
  for (std::size_t i : data.indices(Split::kTrain)) {
    rows.push_back(featurizer.transform(data.instances[i]));
    labels.push_back(data.labels[i]);
  }
  const TrainingMatrix matrix(std::move(rows), std::move(labels), featurizer.dim(),
                              static_cast<int>(data.classes.size()));

  struct Candidate {
    std::shared_ptr<RandomForest> forest;
    double validation;
    double test;
  };
  std::vector<Candidate> pool;
  for (int attempt = 0; attempt < options.max_attempts; ++attempt) {
    ForestOptions forest = options.forest;
    forest.seed = mix_seed(seed, static_cast<std::uint64_t>(attempt) + 1);
    Candidate next{train_forest(featurizer, data.classes, matrix, forest), 0, 0};
    next.validation = accuracy(*next.forest, data, Split::kValidation);
    next.test = accuracy(*next.forest, data, Split::kTest);
    for (const Candidate& prev : pool) {
      if (std::abs(prev.validation - next.validation) <= options.validation_tolerance + 1e-12 &&
          std::abs(prev.test - next.test) >= options.test_gap - 1e-12) {
        pair.first = prev.forest;
        pair.second = next.forest;
        pair.validation_accuracy[0] = prev.validation;
        pair.validation_accuracy[1] = next.validation;
        pair.test_accuracy[0] = prev.test;
        pair.test_accuracy[1] = next.test;
        pair.attempts = attempt + 1;
        return pair;
      }
    }
    pool.push_back(std::move(next));
  }
  throw Error(ErrorCode::kPairGenerationFailed,
              "no forest pair met the accuracy constraints within " +
                  std::to_string(options.max_attempts) + " attempts");
}

ModelChoiceResult eval_model_choice(const SparseDataset& base, std::span<const Method> methods,
                                    const ExplainConfig& cfg, const ModelChoiceOptions& options) {
  if (options.budgets.empty()) throw Error(ErrorCode::kConfigError, "no explanation budgets");
  for (int p : options.budgets) {
    if (p < 0) throw Error(ErrorCode::kConfigError, "explanation budget must be non-negative");
  }
  ModelChoiceResult result;
  result.methods.assign(methods.begin(), methods.end());
  result.budgets = options.budgets;
  const int max_budget = *std::max_element(options.budgets.begin(), options.budgets.end());
  std::map<std::pair<Method, int>, std::vector<double>> hits;

  for (int t = 0; t < options.trials; ++t) {
    const std::uint64_t trial_seed = mix_seed(options.seed, static_cast<std::uint64_t>(t));
    const NoisyDatasetPair pair = generate_pair(base, options, trial_seed);
    const SparseDataset& data = pair.noisy.dataset;
    const std::vector<InterpretableInstance> validation =
        interpretable_instances(data, Split::kValidation);
    if (validation.empty()) throw Error(ErrorCode::kConfigError, "dataset has no validation split");
    const BlackBoxModel* models[2] = {pair.first.get(), pair.second.get()};

    ModelChoiceTrial trial;
    trial.attempts = pair.attempts;
    for (int c = 0; c < 2; ++c) {
      trial.validation_accuracy[c] = pair.validation_accuracy[c];
      trial.test_accuracy[c] = pair.test_accuracy[c];
    }

    // The same P validation instances are shown for every method; smaller
    // budgets use a prefix of the draw.
    std::vector<std::size_t> order(validation.size());
    std::iota(order.begin(), order.end(), 0);
    Rng rng(mix_seed(trial_seed, 0xD2A));
    const std::size_t shown = std::min<std::size_t>(max_budget, order.size());
    for (std::size_t s = 0; s < shown; ++s) {
      std::uniform_int_distribution<std::size_t> pick(s, order.size() - 1);
      std::swap(order[s], order[pick(rng)]);
    }

    // explanations[c][s][m]
    std::vector<std::vector<std::vector<Explanation>>> explanations(2);
    std::vector<int> original[2];
    for (int c = 0; c < 2; ++c) {
      original[c] = predicted_classes(*models[c], validation);
      for (std::size_t s = 0; s < shown; ++s) {
        ExplainConfig local = cfg;
        local.seed = mix_seed(trial_seed, (static_cast<std::uint64_t>(c) << 32) + s);
        explanations[c].push_back(explain_methods(methods, validation[order[s]], *models[c], local));
      }
    }

    std::map<std::set<std::string>, int> flip_cache[2];
    const auto untrustworthy = [&](int c, const std::set<std::string>& marked) {
      auto it = flip_cache[c].find(marked);
      if (it != flip_cache[c].end()) return it->second;
      const std::vector<int> after = classes_after_removal(*models[c], validation, original[c], marked,
                                                           mix_seed(trial_seed, 0xF11F));
      int flips = 0;
      for (std::size_t i = 0; i < after.size(); ++i) flips += after[i] != original[c][i];
      flip_cache[c].emplace(marked, flips);
      return flips;
    };

    Rng coin_rng(mix_seed(trial_seed, 0xC01));
    for (std::size_t m = 0; m < methods.size(); ++m) {
      for (int budget : options.budgets) {
        ChoiceOutcome outcome;
        for (int c = 0; c < 2; ++c) {
          std::set<std::string> marked;
          for (std::size_t s = 0; s < std::min<std::size_t>(budget, shown); ++s) {
            const auto keys = keys_of(explanations[c][s][m], validation[order[s]].repr(), pair.noisy.keys);
            marked.insert(keys.begin(), keys.end());
          }
          outcome.untrustworthy[c] = untrustworthy(c, marked);
        }
        // The coin is drawn for every outcome so ties do not shift later draws.
        const int coin = std::bernoulli_distribution(0.5)(coin_rng) ? 1 : 0;
        if (outcome.untrustworthy[0] == outcome.untrustworthy[1]) {
          outcome.tie = true;
          outcome.pick = coin;
        } else {
          outcome.pick = outcome.untrustworthy[1] < outcome.untrustworthy[0] ? 1 : 0;
        }
        outcome.correct = pair.test_accuracy[outcome.pick] > pair.test_accuracy[1 - outcome.pick];
        hits[{methods[m], budget}].push_back(outcome.correct ? 1.0 : 0.0);
        trial.outcomes[{methods[m], budget}] = outcome;
      }
    }
    result.trials.push_back(std::move(trial));
  }
  for (Method m : methods) {
    for (int budget : options.budgets) result.accuracy[{m, budget}] = summarize(hits[{m, budget}]);
  }
  return result;
}

// ---------------------------------------------------------------------------
// Serialization
// ---------------------------------------------------------------------------

json to_json(const FaithfulnessResult& r) {
  json methods = json::object();
  for (Method m : r.methods) {
    json entry{{"recall", mean_se_json(r.recall.at(m))}};
    if (r.fidelity.count(m) != 0) entry["abs_error"] = mean_se_json(r.fidelity.at(m));
    methods[method_name(m)] = std::move(entry);
  }
  json records = json::array();
  for (const auto& rec : r.records) {
    json row{{"instance_ref", rec.instance_ref},
             {"method", method_name(rec.method)},
             {"recall", std::isnan(rec.recall) ? json() : json(rec.recall)},
             {"gold_present", rec.gold_present}};
    if (rec.fidelity_error) row["abs_error"] = *rec.fidelity_error;
    records.push_back(std::move(row));
  }
  return {{"experiment", "faithfulness"}, {"aggregates", std::move(methods)}, {"records", std::move(records)}};
}

json to_json(const TrustResult& r) {
  json aggregates = json::object();
  for (Method m : r.methods) aggregates[method_name(m)] = {{"f1", mean_se_json(r.f1.at(m))}};
  json trials = json::array();
  for (const auto& t : r.trials) {
    json f1 = json::object();
    for (const auto& [m, v] : t.f1) f1[method_name(m)] = v;
    trials.push_back({{"unrelated_keys", t.unrelated_keys}, {"untrustworthy", t.untrustworthy}, {"f1", f1}});
  }
  return {{"experiment", "trust"},
          {"instances", r.instances},
          {"aggregates", std::move(aggregates)},
          {"trials", std::move(trials)}};
}

json to_json(const ModelChoiceResult& r) {
  json aggregates = json::array();
  for (Method m : r.methods) {
    for (int p : r.budgets) {
      aggregates.push_back({{"method", method_name(m)}, {"budget", p}, {"accuracy", mean_se_json(r.accuracy.at({m, p}))}});
    }
  }
  json trials = json::array();
  for (const auto& t : r.trials) {
    json outcomes = json::array();
    for (const auto& [key, o] : t.outcomes) {
      outcomes.push_back({{"method", method_name(key.first)},
                          {"budget", key.second},
                          {"untrustworthy", {o.untrustworthy[0], o.untrustworthy[1]}},
                          {"pick", o.pick},
                          {"tie", o.tie},
                          {"correct", o.correct}});
    }
    trials.push_back({{"attempts", t.attempts},
                      {"validation_accuracy", {t.validation_accuracy[0], t.validation_accuracy[1]}},
                      {"test_accuracy", {t.test_accuracy[0], t.test_accuracy[1]}},
                      {"outcomes", std::move(outcomes)}});
  }
  return {{"experiment", "model-choice"}, {"aggregates", std::move(aggregates)}, {"trials", std::move(trials)}};
}

std::string to_csv(const FaithfulnessResult& r) {
  std::ostringstream out;
  out << "method,recall_mean,recall_se,abs_error_mean,abs_error_se,instances\n";
  for (Method m : r.methods) {
    const MeanSe& rec = r.recall.at(m);
    const MeanSe err = r.fidelity.count(m) ? r.fidelity.at(m) : MeanSe{};
    out << method_name(m) << ',' << fmt(rec, true) << ',' << fmt(rec, false) << ',' << fmt(err, true) << ','
        << fmt(err, false) << ',' << std::max(rec.count, err.count) << '\n';
  }
  return out.str();
}

std::string to_csv(const TrustResult& r) {
  std::ostringstream out;
  out << "method,f1_mean,f1_se,trials\n";
  for (Method m : r.methods) {
    const MeanSe& f = r.f1.at(m);
    out << method_name(m) << ',' << fmt(f, true) << ',' << fmt(f, false) << ',' << f.count << '\n';
  }
  return out.str();
}

std::string to_csv(const ModelChoiceResult& r) {
  std::ostringstream out;
  out << "method,budget,accuracy_mean,accuracy_se,trials\n";
  for (Method m : r.methods) {
    for (int p : r.budgets) {
      const MeanSe& a = r.accuracy.at({m, p});
      out << method_name(m) << ',' << p << ',' << fmt(a, true) << ',' << fmt(a, false) << ',' << a.count << '\n';
    }
  }
  return out.str();
}

std::string to_table(const FaithfulnessResult& r) {
  std::ostringstream out;
  out << std::left << std::setw(8) << "method" << std::right << std::setw(12) << "recall" << std::setw(12)
      << "abs_error" << '\n';
  for (Method m : r.methods) {
    const MeanSe& rec = r.recall.at(m);
    out << std::left << std::setw(8) << method_name(m) << std::right << std::setw(12)
        << (rec.count ? fmt(rec.mean) : "-") << std::setw(12)
        << (r.fidelity.count(m) && r.fidelity.at(m).count ? fmt(r.fidelity.at(m).mean) : "-") << '\n';
  }
  return out.str();
}

std::string to_table(const TrustResult& r) {
  std::ostringstream out;
  out << std::left << std::setw(8) << "method" << std::right << std::setw(12) << "f1" << std::setw(12) << "se"
      << '\n';
  for (Method m : r.methods) {
    const MeanSe& f = r.f1.at(m);
    out << std::left << std::setw(8) << method_name(m) << std::right << std::setw(12) << fmt(f.mean)
        << std::setw(12) << fmt(f.se) << '\n';
  }
  return out.str();
}

std::string to_table(const ModelChoiceResult& r) {
  std::ostringstream out;
  out << std::left << std::setw(8) << "method" << std::right << std::setw(8) << "P" << std::setw(12)
      << "accuracy" << '\n';
  for (Method m : r.methods) {
    for (int p : r.budgets) {
      out << std::left << std::setw(8) << method_name(m) << std::right << std::setw(8) << p << std::setw(12)
          << fmt(r.accuracy.at({m, p}).mean) << '\n';
    }
  }
  return out.str();
}

}  // namespace cle
