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

#include "cle/explainer.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <exception>
#include <numeric>
#include <thread>

#include "cle/error.hpp"

namespace cle {

namespace {

// Substream tags derived from the configured seed.
constexpr std::uint64_t kReconstructStream = 0x7AB1;
constexpr std::uint64_t kGreedyStream = 0x6EED;
constexpr std::uint64_t kRandomStream = 0x4A2D;

class Stopwatch {
 public:
  Stopwatch() : start_(std::chrono::steady_clock::now()) {}
  double lap() {
    const auto now = std::chrono::steady_clock::now();
    const double s = std::chrono::duration<double>(now - start_).count();
    start_ = now;
    return s;
  }

 private:
  std::chrono::steady_clock::time_point start_;
};

int argmax_row(const Eigen::MatrixXd& probs, Eigen::Index row) {
  Eigen::Index best = 0;
  for (Eigen::Index c = 1; c < probs.cols(); ++c) {
    if (probs(row, c) > probs(row, best)) best = c;
  }
  return static_cast<int>(best);
}

void check_probabilities(const Eigen::MatrixXd& probs, std::size_t rows, int classes) {
  if (probs.rows() != static_cast<Eigen::Index>(rows) || probs.cols() != classes) {
    throw Error(ErrorCode::kModelFailure, "model returned a matrix of the wrong shape");
  }
  for (Eigen::Index i = 0; i < probs.rows(); ++i) {
    double sum = 0;
    for (Eigen::Index c = 0; c < probs.cols(); ++c) {
      const double p = probs(i, c);
      if (!std::isfinite(p) || p < -1e-9 || p > 1 + 1e-9) {
        throw Error(ErrorCode::kModelFailure, "model returned a value outside [0, 1]");
      }
      sum += p;
    }
    if (std::abs(sum - 1.0) > 1e-6) {
      throw Error(ErrorCode::kModelFailure, "model returned probabilities not summing to 1");
    }
  }
}

Eigen::MatrixXd predict_checked(const BlackBoxModel& model, std::span<const Instance> batch) {
  Eigen::MatrixXd probs;
  try {
    probs = model.predict_proba(batch);
  } catch (const Error&) {
    throw;
  } catch (const std::exception& e) {
    throw Error(ErrorCode::kModelFailure, e.what());
  }
  check_probabilities(probs, batch.size(), model.class_count());
  return probs;
}

std::string term_label(const BinaryRepr& repr, const std::vector<int>& indices) {
  std::string label;
  for (std::size_t t = 0; t < indices.size(); ++t) {
    if (t > 0) label += " AND ";
    label += repr.units[indices[t]].label;
  }
  return label;
}

Explanation skeleton(Method method, const InterpretableInstance& instance, const ExplainConfig& cfg) {
  Explanation e;
  e.method = method;
  e.instance_ref = instance.ref();
  e.dim = instance.dim();
  e.config = cfg;
  e.warnings = instance.repr().warnings;
  return e;
}

Explanation from_fit(Method method, const InterpretableInstance& instance, const Neighborhood& hood,
                     const ExplainConfig& cfg, const LinearFit<double>& fit,
                     std::span<const Combination> combos) {
  Explanation e = skeleton(method, instance, cfg);
  const int d = instance.dim();
  e.explained_class = hood.explained_class;
  e.explained_class_name = hood.explained_class_name;
  for (std::size_t c = 0; c < fit.columns.size(); ++c) {
    Term term;
    const auto col = static_cast<int>(fit.columns[c]);
    if (col < d) {
      term.indices = {col};
    } else {
      term.kind = Term::Kind::kCombo;
      term.indices = combos[col - d];
    }
    term.label = term_label(instance.repr(), term.indices);
    term.coefficient = fit.coefficients(static_cast<Eigen::Index>(c));
    e.terms.push_back(std::move(term));
  }
  // Largest magnitude first; stable so column order breaks ties.
  std::stable_sort(e.terms.begin(), e.terms.end(), [](const Term& a, const Term& b) {
    return std::abs(*a.coefficient) > std::abs(*b.coefficient);
  });
  e.intercept = fit.intercept;
  e.local_prediction = fit.local_prediction;
  e.black_box_prediction = hood.batch.outputs(0);
  e.fidelity_error = std::abs(fit.local_prediction - hood.batch.outputs(0));
  e.r2 = fit.r2;
  e.degenerate = fit.degenerate;
  e.converged = fit.converged;
  if (fit.degenerate) e.warnings.push_back("every design column is constant; intercept-only model");
  if (!fit.converged) e.warnings.push_back("coordinate descent hit its sweep budget on the path");
  e.timings = hood.timings;
  return e;
}

int resolve_class(const ExplainConfig& cfg, const Eigen::MatrixXd& original_probs, int classes) {
  if (cfg.explained_class) {
    if (*cfg.explained_class < 0 || *cfg.explained_class >= classes) {
      throw Error(ErrorCode::kConfigError, "explained class outside the model's classes");
    }
    return *cfg.explained_class;
  }
  return argmax_row(original_probs, 0);
}

void require_modality(const InterpretableInstance& instance, const BlackBoxModel& model) {
  if (instance.modality() != model.modality()) {
    throw Error(ErrorCode::kConfigError, "model expects " + std::string(modality_name(model.modality())) +
                                             " instances, got " +
                                             std::string(modality_name(instance.modality())));
  }
}

}  // namespace

const char* method_name(Method method) {
  switch (method) {
    case Method::kCle: return "cle";
    case Method::kLime: return "lime";
    case Method::kGreedy: return "greedy";
    case Method::kRandom: return "random";
  }
  return "?";
}

Method parse_method(const std::string& name) {
  for (Method m : {Method::kCle, Method::kLime, Method::kGreedy, Method::kRandom}) {
    if (name == method_name(m)) return m;
  }
  throw Error(ErrorCode::kConfigError, "unknown method '" + name + "'");
}

void ExplainConfig::validate() const {
  if (n_samples < 2) throw Error(ErrorCode::kConfigError, "n_samples must be at least 2");
  if (k < 1) throw Error(ErrorCode::kConfigError, "K must be at least 1");
  if (batch_size < 1) throw Error(ErrorCode::kConfigError, "batch size must be positive");
  if (kernel && !(kernel->sigma > 0)) throw Error(ErrorCode::kConfigError, "sigma must be positive");
}

KernelConfig ExplainConfig::kernel_for(Modality modality) const {
  return kernel ? *kernel : KernelConfig::for_modality(modality);
}

Eigen::MatrixXd predict_batched(const BlackBoxModel& model, std::span<const Instance> batch,
                                int batch_size, int max_threads) {
  if (batch_size < 1) throw Error(ErrorCode::kConfigError, "batch size must be positive");
  const std::size_t chunks = (batch.size() + batch_size - 1) / static_cast<std::size_t>(batch_size);
  Eigen::MatrixXd out(static_cast<Eigen::Index>(batch.size()), model.class_count());
  const auto run = [&](std::size_t chunk) {
    const std::size_t begin = chunk * static_cast<std::size_t>(batch_size);
    const std::size_t len = std::min<std::size_t>(batch_size, batch.size() - begin);
    out.middleRows(static_cast<Eigen::Index>(begin), static_cast<Eigen::Index>(len)) =
        predict_checked(model, batch.subspan(begin, len));
  };
  int threads = max_threads > 0 ? max_threads : static_cast<int>(std::thread::hardware_concurrency());
  threads = std::clamp<int>(threads, 1, static_cast<int>(std::max<std::size_t>(chunks, 1)));
  if (threads == 1 || !model.reentrant()) {
    for (std::size_t c = 0; c < chunks; ++c) run(c);
    return out;
  }
  std::vector<std::exception_ptr> errors(threads);
  std::vector<std::thread> pool;
  for (int t = 0; t < threads; ++t) {
    pool.emplace_back([&, t] {
      try {
        for (std::size_t c = t; c < chunks; c += threads) run(c);
      } catch (...) {
        errors[t] = std::current_exception();
      }
    });
  }
  for (auto& th : pool) th.join();
  for (auto& err : errors) {
    if (err) std::rethrow_exception(err);
  }
  return out;
}

Neighborhood sample_neighborhood(const InterpretableInstance& instance, const BlackBoxModel& model,
                                 const ExplainConfig& cfg) {
  cfg.validate();
  require_modality(instance, model);
  const KernelConfig kernel = cfg.kernel_for(instance.modality());
  const Bits& x = instance.repr().bits;
  Neighborhood hood;
  hood.batch.seed = cfg.seed;

  Stopwatch clock;
  hood.batch.samples = perturb(x, cfg.n_samples, cfg.seed);
  const int n = hood.batch.size();
  hood.batch.weights.resize(n);
  for (int i = 0; i < n; ++i) {
    hood.batch.weights(i) = kernel_weight(distance(x, hood.batch.samples[i], kernel.metric), kernel);
  }
  hood.timings.perturb += clock.lap();

  // Reconstruct and score in chunks so image neighbourhoods stay bounded in memory.
  const std::uint64_t recon_seed = mix_seed(cfg.seed, kReconstructStream);
  const int chunk = cfg.batch_size * 16;
  hood.batch.outputs.resize(n);
  std::vector<Instance> raw;
  for (int begin = 0; begin < n; begin += chunk) {
    const int end = std::min(n, begin + chunk);
    raw.clear();
    for (int i = begin; i < end; ++i) {
      raw.push_back(instance.reconstruct(hood.batch.samples[i], mix_seed(recon_seed, i)));
    }
    hood.timings.perturb += clock.lap();
    const Eigen::MatrixXd probs = predict_batched(model, raw, cfg.batch_size, cfg.max_threads);
    if (begin == 0) {
      hood.explained_class = resolve_class(cfg, probs, model.class_count());
      hood.explained_class_name = model.classes()[hood.explained_class];
    }
    hood.batch.outputs.segment(begin, end - begin) = probs.col(hood.explained_class);
    hood.timings.predict += clock.lap();
  }
  return hood;
}

WeightedDesign<double> build_design(const Neighborhood& hood, std::span<const Combination> combos) {
  const int n = hood.batch.size();
  const int d = n > 0 ? static_cast<int>(hood.batch.samples[0].size()) : 0;
  const int l = static_cast<int>(combos.size());
  WeightedDesign<double> design;
  design.X.resize(n, d + l);
  for (int i = 0; i < n; ++i) {
    const Bits& p = hood.batch.samples[i];
    for (int j = 0; j < d; ++j) design.X(i, j) = p[j];
    if (l > 0) {
      const Bits ext = extension_bits(p, combos);
      for (int c = 0; c < l; ++c) design.X(i, d + c) = ext[c];
    }
  }
  design.y = hood.batch.outputs;
  design.w = hood.batch.weights;
  return design;
}

namespace {

std::vector<int> focus_of(const LinearFit<double>& base) {
  std::vector<int> focus(base.columns.begin(), base.columns.end());
  std::sort(focus.begin(), focus.end());
  return focus;
}

// `base` is the fit over the base columns, reused for the automatic focus.
std::vector<Combination> combinations_for(const LinearFit<double>& base, const ExplainConfig& cfg,
                                          int dim) {
  CombinationSpec spec;
  spec.spans = cfg.combination.spans;
  if (cfg.combination.focus) {
    spec.focus = *cfg.combination.focus;
    if (spec.focus.empty()) return {};
  } else {
    spec.focus = focus_of(base);
    const auto lambda = static_cast<int>(spec.focus.size());
    std::erase_if(spec.spans, [lambda](int b) { return b > lambda; });
    if (spec.spans.empty()) return {};
  }
  spec.validate(dim);
  return enumerate_combinations(spec);
}

}  // namespace

std::vector<int> auto_focus(const Neighborhood& hood, int k) {
  return focus_of(k_lasso(build_design(hood), k));
}

std::vector<Combination> resolve_combinations(const Neighborhood& hood, const ExplainConfig& cfg,
                                              int dim) {
  return combinations_for(k_lasso(build_design(hood), cfg.k), cfg, dim);
}

Explanation explain_lime(const InterpretableInstance& instance, const Neighborhood& hood,
                         const ExplainConfig& cfg) {
  Stopwatch clock;
  const LinearFit<double> fit = k_lasso(build_design(hood), cfg.k);
  const double fit_time = clock.lap();
  Explanation e = from_fit(Method::kLime, instance, hood, cfg, fit, {});
  e.timings.fit = fit_time;
  return e;
}

Explanation explain_cle(const InterpretableInstance& instance, const Neighborhood& hood,
                        const ExplainConfig& cfg) {
  Stopwatch clock;
  const LinearFit<double> base = k_lasso(build_design(hood), cfg.k);
  const std::vector<Combination> combos = combinations_for(base, cfg, instance.dim());
  double fit_time = clock.lap();
  if (combos.empty()) {
    Explanation e = from_fit(Method::kCle, instance, hood, cfg, base, {});
    e.timings.fit = fit_time;
    return e;
  }
  const WeightedDesign<double> design = build_design(hood, combos);
  const double extend_time = clock.lap();
  LinearFit<double> fit = k_lasso(design, cfg.k);
  // The base-column fit is also a K-term model over the extended design. The
  // Lasso path can spend the budget on combinations that merely proxy for
  // sums of singletons, so keep whichever candidate has the lower weighted
  // loss (same targets and weights, hence the higher R^2).
  if (!base.degenerate && (fit.degenerate || base.r2 > fit.r2)) fit = base;
  fit_time += clock.lap();
  Explanation e = from_fit(Method::kCle, instance, hood, cfg, fit, combos);
  e.timings.extend = extend_time;
  e.timings.fit = fit_time;
  return e;
}

Explanation explain_lime(const InterpretableInstance& instance, const BlackBoxModel& model,
                         const ExplainConfig& cfg) {
  return explain_lime(instance, sample_neighborhood(instance, model, cfg), cfg);
}

Explanation explain_cle(const InterpretableInstance& instance, const BlackBoxModel& model,
                        const ExplainConfig& cfg) {
  return explain_cle(instance, sample_neighborhood(instance, model, cfg), cfg);
}

Explanation explain_greedy(const InterpretableInstance& instance, const BlackBoxModel& model,
                           const ExplainConfig& cfg) {
  cfg.validate();
  require_modality(instance, model);
  Explanation e = skeleton(Method::kGreedy, instance, cfg);
  Stopwatch clock;
  const Instance& original = instance.original();
  const Eigen::MatrixXd base = predict_checked(model, std::span<const Instance>(&original, 1));
  e.explained_class = resolve_class(cfg, base, model.class_count());
  e.explained_class_name = model.classes()[e.explained_class];
  e.black_box_prediction = base(0, e.explained_class);
  e.timings.predict += clock.lap();

  const int d = instance.dim();
  const std::uint64_t seed = mix_seed(cfg.seed, kGreedyStream);
  Bits bits = instance.repr().bits;
  std::vector<int> remaining(d);
  std::iota(remaining.begin(), remaining.end(), 0);
  double current = *e.black_box_prediction;
  std::vector<Instance> candidates;
  for (int rank = 1; rank <= cfg.k && !remaining.empty(); ++rank) {
    candidates.clear();
    for (int j : remaining) {
      bits[j] = 0;
      candidates.push_back(instance.reconstruct(bits, seed));
      bits[j] = 1;
    }
    e.timings.perturb += clock.lap();
    const Eigen::MatrixXd probs = predict_batched(model, candidates, cfg.batch_size, cfg.max_threads);
    e.timings.predict += clock.lap();
    std::size_t best = 0;
    for (std::size_t t = 1; t < remaining.size(); ++t) {
      if (probs(static_cast<Eigen::Index>(t), e.explained_class) <
          probs(static_cast<Eigen::Index>(best), e.explained_class)) {
        best = t;
      }
    }
    const int j = remaining[best];
    const double next = probs(static_cast<Eigen::Index>(best), e.explained_class);
    Term term;
    term.indices = {j};
    term.label = term_label(instance.repr(), term.indices);
    term.coefficient = current - next;
    term.rank = rank;
    e.terms.push_back(std::move(term));
    bits[j] = 0;
    current = next;
    remaining.erase(remaining.begin() + static_cast<std::ptrdiff_t>(best));
  }
  return e;
}

Explanation explain_random(const InterpretableInstance& instance, const ExplainConfig& cfg,
                           const BlackBoxModel* model) {
  if (cfg.k < 1) throw Error(ErrorCode::kConfigError, "K must be at least 1");
  Explanation e = skeleton(Method::kRandom, instance, cfg);
  if (model != nullptr) {
    require_modality(instance, *model);
    const Instance& original = instance.original();
    const Eigen::MatrixXd base = predict_checked(*model, std::span<const Instance>(&original, 1));
    e.explained_class = resolve_class(cfg, base, model->class_count());
    e.explained_class_name = model->classes()[e.explained_class];
    e.black_box_prediction = base(0, e.explained_class);
  } else if (cfg.explained_class) {
    e.explained_class = *cfg.explained_class;
  }
  const int d = instance.dim();
  std::vector<int> pool(d);
  std::iota(pool.begin(), pool.end(), 0);
  Rng rng(mix_seed(cfg.seed, kRandomStream));
  const int take = std::min(cfg.k, d);
  for (int t = 0; t < take; ++t) {
    std::uniform_int_distribution<int> pick(t, d - 1);
    std::swap(pool[t], pool[pick(rng)]);
    Term term;
    term.indices = {pool[t]};
    term.label = term_label(instance.repr(), term.indices);
    term.rank = t + 1;
    e.terms.push_back(std::move(term));
  }
  return e;
}

Explanation explain(Method method, const InterpretableInstance& instance, const BlackBoxModel& model,
                    const ExplainConfig& cfg) {
  switch (method) {
    case Method::kCle: return explain_cle(instance, model, cfg);
    case Method::kLime: return explain_lime(instance, model, cfg);
    case Method::kGreedy: return explain_greedy(instance, model, cfg);
    case Method::kRandom: return explain_random(instance, cfg, &model);
  }
  throw Error(ErrorCode::kConfigError, "unknown method");
}

CostReport estimate_cost(int dim, int n_samples, int focus_size, const std::vector<int>& spans,
                         const UnitTimes& unit) {
  CostReport r;
  r.n_samples = n_samples;
  r.dim = dim;
  r.focus_size = focus_size;
  r.spans = spans;
  for (int b : spans) r.extension_length += choose(focus_size, b);
  r.unit = unit;
  const double n = n_samples;
  r.perturb_total = n * unit.perturb;
  r.predict_total = n * unit.predict;
  r.extend_total = n * unit.extend;
  r.fit_total = unit.fit;
  r.per_sample_total = n * (unit.perturb + unit.predict + unit.extend);
  r.total = r.per_sample_total + r.fit_total;
  const std::pair<double, const char*> stages[] = {{r.perturb_total, "perturb"},
                                                   {r.predict_total, "predict"},
                                                   {r.extend_total, "extend"},
                                                   {r.fit_total, "fit"}};
  const auto* best = std::max_element(std::begin(stages), std::end(stages),
                                      [](const auto& a, const auto& b) { return a.first < b.first; });
  r.dominant = best->second;
  return r;
}

UnitTimes calibrate(const InterpretableInstance& instance, const BlackBoxModel& model,
                    const ExplainConfig& cfg, int dry_run) {
  ExplainConfig probe = cfg;
  probe.n_samples = std::max(dry_run, 2);
  const Neighborhood hood = sample_neighborhood(instance, model, probe);
  Stopwatch clock;
  const std::vector<Combination> combos = resolve_combinations(hood, probe, instance.dim());
  clock.lap();
  const WeightedDesign<double> design = build_design(hood, combos);
  const double extend = clock.lap();
  (void)k_lasso(design, probe.k);
  const double fit = clock.lap();
  UnitTimes unit;
  const double n = probe.n_samples;
  unit.perturb = hood.timings.perturb / n;
  unit.predict = hood.timings.predict / n;
  unit.extend = extend / n;
  unit.fit = fit;
  return unit;
}

}  // namespace cle
