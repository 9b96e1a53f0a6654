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

#ifndef CLE_EVAL_HPP_
#define CLE_EVAL_HPP_

// Simulated-user experiments: gold-feature recall and local fidelity, trust
// prediction under removal of unrelated features, and choosing between two
// classifiers trained on data with spurious features.

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "cle/explainer.hpp"
#include "cle/models.hpp"
#include "cle/repr.hpp"

namespace cle {

struct MeanSe {
  double mean = 0;
  double se = 0;
  int count = 0;
};

// NaN entries are skipped.
MeanSe summarize(const std::vector<double>& values);

std::shared_ptr<const TabularContext> training_context(const SparseDataset& dataset);

// Instances of one split, referenced as "<split>:<row>". `limit` 0 keeps all.
std::vector<InterpretableInstance> interpretable_instances(
    const SparseDataset& dataset, Split split,
    std::shared_ptr<const TabularContext> context = nullptr, std::size_t limit = 0);

// One explanation per method; LIME and CLE share one neighbourhood.
std::vector<Explanation> explain_methods(std::span<const Method> methods,
                                         const InterpretableInstance& instance,
                                         const BlackBoxModel& model, const ExplainConfig& cfg);

// Features an explanation points a user at: every member of every term.
std::vector<int> explained_features(const Explanation& explanation);

// Features a simulated user acts on. Greedy terms whose removal left the
// probability unchanged carry no evidence and are skipped.
std::vector<int> flagged_features(const Explanation& explanation);

// |explained ∩ gold ∩ present| / |gold ∩ present|; NaN when no gold feature
// is present in the instance.
double gold_recall(const Explanation& explanation, const BinaryRepr& repr,
                   const std::set<std::string>& gold_keys);

// ---------------------------------------------------------------------------
// Faithfulness
// ---------------------------------------------------------------------------

struct FaithfulnessRecord {
  std::string instance_ref;
  Method method = Method::kLime;
  double recall = 0;  // NaN without gold features
  std::optional<double> fidelity_error;
  int gold_present = 0;
};

struct FaithfulnessResult {
  std::vector<Method> methods;
  std::vector<FaithfulnessRecord> records;
  std::map<Method, MeanSe> recall;
  std::map<Method, MeanSe> fidelity;  // cle and lime only
};

// Instance i is explained with seed mix_seed(cfg.seed, i). `gold_keys`
// absent skips recall.
FaithfulnessResult eval_faithfulness(const BlackBoxModel& model,
                                     std::span<const InterpretableInstance> instances,
                                     std::span<const Method> methods, const ExplainConfig& cfg,
                                     const std::optional<std::set<std::string>>& gold_keys);

// ---------------------------------------------------------------------------
// Trust
// ---------------------------------------------------------------------------

struct TrustOptions {
  // Share of feature keys marked unrelated; absent means 0.25, or 0.10 for
  // images.
  std::optional<double> unrelated_fraction;
  int trials = 5;
  std::uint64_t seed = 0;
};

struct TrustTrial {
  int unrelated_keys = 0;
  int untrustworthy = 0;  // ground truth count
  std::map<Method, double> f1;
};

struct TrustResult {
  std::vector<Method> methods;
  int instances = 0;
  std::vector<TrustTrial> trials;
  std::map<Method, MeanSe> f1;
};

// F1 of the trustworthy class; 1 when there is nothing to get wrong.
double trust_f1(const std::vector<bool>& truth_trusted, const std::vector<bool>& judged_trusted);

TrustResult eval_trust(const BlackBoxModel& model, std::span<const InterpretableInstance> instances,
                       std::span<const Method> methods, const ExplainConfig& cfg,
                       const TrustOptions& options);

// ---------------------------------------------------------------------------
// Model choice
// ---------------------------------------------------------------------------

struct NoiseOptions {
  int n_features = 10;
  double rate_low = 0.10;
  double rate_high = 0.20;
  std::uint64_t seed = 0;
};

struct NoisyDataset {
  SparseDataset dataset;
  std::vector<std::string> keys;   // artificial tokens
  std::vector<int> high_class;     // class receiving rate_high, per feature
};

// Appends artificial tokens to text documents. Train and validation rows
// carry feature f with probability rate_high in class high_class[f] and
// rate_low otherwise; test rows carry it with rate_low in every class.
NoisyDataset inject_noise(const SparseDataset& dataset, const NoiseOptions& options);

struct ModelChoiceOptions {
  int trials = 100;
  std::vector<int> budgets{10};
  NoiseOptions noise;
  ForestOptions forest;
  int max_attempts = 200;
  double validation_tolerance = 0.001;
  double test_gap = 0.05;
  std::uint64_t seed = 0;
};

struct NoisyDatasetPair {
  NoisyDataset noisy;
  std::shared_ptr<RandomForest> first;
  std::shared_ptr<RandomForest> second;
  double validation_accuracy[2] = {0, 0};
  double test_accuracy[2] = {0, 0};
  int attempts = 0;  // forests trained
};

// Trains forests with derived seeds until two of them satisfy the accuracy
// constraints. Throws PairGenerationFailed after max_attempts forests.
NoisyDatasetPair generate_pair(const SparseDataset& base, const ModelChoiceOptions& options,
                               std::uint64_t seed);

double accuracy(const BlackBoxModel& model, const SparseDataset& dataset, Split split);

struct ChoiceOutcome {
  int untrustworthy[2] = {0, 0};
  int pick = 0;
  bool tie = false;
  bool correct = false;
};

struct ModelChoiceTrial {
  int attempts = 0;
  double validation_accuracy[2] = {0, 0};
  double test_accuracy[2] = {0, 0};
  std::map<std::pair<Method, int>, ChoiceOutcome> outcomes;  // (method, budget)
};

struct ModelChoiceResult {
  std::vector<Method> methods;
  std::vector<int> budgets;
  std::vector<ModelChoiceTrial> trials;
  std::map<std::pair<Method, int>, MeanSe> accuracy;
};

ModelChoiceResult eval_model_choice(const SparseDataset& base, std::span<const Method> methods,
                                    const ExplainConfig& cfg, const ModelChoiceOptions& options);

// ---------------------------------------------------------------------------
// Serialization
// ---------------------------------------------------------------------------

nlohmann::json to_json(const FaithfulnessResult& result);
nlohmann::json to_json(const TrustResult& result);
nlohmann::json to_json(const ModelChoiceResult& result);
std::string to_csv(const FaithfulnessResult& result);
std::string to_csv(const TrustResult& result);
std::string to_csv(const ModelChoiceResult& result);
// Aligned plain-text summary for terminals.
std::string to_table(const FaithfulnessResult& result);
std::string to_table(const TrustResult& result);
std::string to_table(const ModelChoiceResult& result);

}  // namespace cle

#endif  // CLE_EVAL_HPP_
