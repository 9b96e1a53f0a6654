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

#ifndef CLE_EXPLAINER_HPP_
#define CLE_EXPLAINER_HPP_

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "cle/models.hpp"
#include "cle/repr.hpp"
#include "cle/sampler.hpp"
#include "cle/solver.hpp"

namespace cle {

enum class Method { kCle, kLime, kGreedy, kRandom };

const char* method_name(Method method);
// Throws ConfigError on unknown names.
Method parse_method(const std::string& name);

struct CombinationConfig {
  std::vector<int> spans{2};
  // Absent: the base-column K-Lasso selection from the same batch, ascending,
  // and spans larger than the focus are dropped. Present but empty: no
  // extension at all.
  std::optional<std::vector<int>> focus;
};

struct ExplainConfig {
  int n_samples = 15000;
  int k = 10;
  std::optional<KernelConfig> kernel;  // absent: per-modality default
  CombinationConfig combination;
  std::uint64_t seed = 0;
  std::optional<int> explained_class;  // absent: black-box argmax
  int batch_size = 256;
  int max_threads = 0;  // prediction fan-out for reentrant models; 0 = hardware

  void validate() const;
  KernelConfig kernel_for(Modality modality) const;
};

struct Term {
  enum class Kind { kSingle, kCombo };
  Kind kind = Kind::kSingle;
  std::vector<int> indices;
  std::string label;
  std::optional<double> coefficient;
  std::optional<int> rank;
};

struct StageTimings {
  double perturb = 0;
  double predict = 0;
  double extend = 0;
  double fit = 0;
};

struct Explanation {
  Method method = Method::kLime;
  std::string instance_ref;
  int explained_class = 0;
  std::string explained_class_name;
  int dim = 0;
  std::vector<Term> terms;
  std::optional<double> intercept;
  std::optional<double> local_prediction;
  std::optional<double> black_box_prediction;
  std::optional<double> fidelity_error;
  std::optional<double> r2;
  bool degenerate = false;
  bool converged = true;
  ExplainConfig config;
  StageTimings timings;
  std::vector<std::string> warnings;

  // Sum of coefficients over terms for which `drop` returns true.
  template <typename Pred>
  double contribution(Pred drop) const {
    double sum = 0;
    for (const Term& t : terms) {
      if (t.coefficient && drop(t)) sum += *t.coefficient;
    }
    return sum;
  }
};

// Scores `batch` in chunks of `batch_size`, checking every row is a
// probability vector. Adapter failures surface as ModelFailure.
Eigen::MatrixXd predict_batched(const BlackBoxModel& model, std::span<const Instance> batch,
                                int batch_size = 256, int max_threads = 1);

// Perturbed neighbourhood of one instance: the shared input of LIME and CLE.
struct Neighborhood {
  PerturbationBatch batch;
  int explained_class = 0;
  std::string explained_class_name;
  StageTimings timings;
};

Neighborhood sample_neighborhood(const InterpretableInstance& instance, const BlackBoxModel& model,
                                 const ExplainConfig& cfg);

// Weighted design over the base bits, optionally followed by combination
// columns.
WeightedDesign<double> build_design(const Neighborhood& hood,
                                    std::span<const Combination> combos = {});

// Focus used when the configuration leaves it open.
std::vector<int> auto_focus(const Neighborhood& hood, int k);

// Combinations a CLE run would append for this neighbourhood.
std::vector<Combination> resolve_combinations(const Neighborhood& hood, const ExplainConfig& cfg,
                                              int dim);

Explanation explain_lime(const InterpretableInstance& instance, const Neighborhood& hood,
                         const ExplainConfig& cfg);
Explanation explain_cle(const InterpretableInstance& instance, const Neighborhood& hood,
                        const ExplainConfig& cfg);

Explanation explain_lime(const InterpretableInstance& instance, const BlackBoxModel& model,
                         const ExplainConfig& cfg);
Explanation explain_cle(const InterpretableInstance& instance, const BlackBoxModel& model,
                        const ExplainConfig& cfg);
// Removes, K times, the remaining feature whose removal lowers the explained
// probability most (ties to the lowest index). Coefficients carry the drop.
Explanation explain_greedy(const InterpretableInstance& instance, const BlackBoxModel& model,
                           const ExplainConfig& cfg);
// Seeded uniform K-subset. The model, when given, only fills the black-box
// prediction.
Explanation explain_random(const InterpretableInstance& instance, const ExplainConfig& cfg,
                           const BlackBoxModel* model = nullptr);

Explanation explain(Method method, const InterpretableInstance& instance, const BlackBoxModel& model,
                    const ExplainConfig& cfg);

// ---------------------------------------------------------------------------
// Cost model: T = N * (t_perturb + t_predict + t_extend) + t_fit
// ---------------------------------------------------------------------------

struct UnitTimes {
  double perturb = 0;  // seconds per sample
  double predict = 0;
  double extend = 0;
  double fit = 0;  // seconds per fit
};

struct CostReport {
  int n_samples = 0;
  int dim = 0;
  int focus_size = 0;
  std::vector<int> spans;
  std::size_t extension_length = 0;
  UnitTimes unit;
  double perturb_total = 0;
  double predict_total = 0;
  double extend_total = 0;
  double fit_total = 0;
  double per_sample_total = 0;  // N * (t_perturb + t_predict + t_extend)
  double total = 0;
  std::string dominant;  // "perturb", "predict", "extend" or "fit"
};

CostReport estimate_cost(int dim, int n_samples, int focus_size, const std::vector<int>& spans,
                         const UnitTimes& unit);

// Times a dry run of `dry_run` samples through every stage.
UnitTimes calibrate(const InterpretableInstance& instance, const BlackBoxModel& model,
                    const ExplainConfig& cfg, int dry_run = 100);

}  // namespace cle

#endif  // CLE_EXPLAINER_HPP_
