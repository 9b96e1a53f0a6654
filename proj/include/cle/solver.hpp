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

#ifndef CLE_SOLVER_HPP_
#define CLE_SOLVER_HPP_

// Weighted sparse linear fitting: standardization, coordinate-descent Lasso,
// the K-Lasso selection path and a weighted least-squares refit.
//
// Every routine is templated on the scalar type and works on dense Eigen
// matrices. Designs are small (a few hundred columns at most), so the Lasso
// runs in covariance form: the weighted Gram matrix is formed once and each
// coordinate update costs O(m).

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include <Eigen/Dense>

#include "cle/error.hpp"

namespace cle {

template <typename Scalar>
using MatrixX = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
template <typename Scalar>
using VectorX = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

// n x m design with targets and strictly positive sample weights.
template <typename Scalar>
struct WeightedDesign {
  MatrixX<Scalar> X;
  VectorX<Scalar> y;
  VectorX<Scalar> w;

  Eigen::Index rows() const { return X.rows(); }
  Eigen::Index cols() const { return X.cols(); }

  void validate() const {
    if (X.rows() != y.size() || X.rows() != w.size()) {
      throw Error(ErrorCode::kLengthMismatch, "design, targets and weights disagree in length");
    }
    if (X.rows() < 2) throw Error(ErrorCode::kDegenerate, "design needs at least two rows");
    if ((w.array() <= Scalar(0)).any()) {
      throw Error(ErrorCode::kDegenerate, "sample weights must be positive");
    }
  }
};

enum class ColumnStatus { kActive, kConstant, kDuplicate };

template <typename Scalar>
struct StandardizedDesign {
  MatrixX<Scalar> X;  // weighted-centered, unit weighted variance; inactive columns zeroed
  VectorX<Scalar> y;  // weighted-centered targets
  VectorX<Scalar> w;
  VectorX<Scalar> mean;
  VectorX<Scalar> scale;
  Scalar y_mean = 0;
  Scalar weight_sum = 0;
  std::vector<ColumnStatus> status;

  bool active(Eigen::Index j) const { return status[j] == ColumnStatus::kActive; }

  Eigen::Index active_count() const {
    return std::count(status.begin(), status.end(), ColumnStatus::kActive);
  }

  VectorX<Scalar> original_coefficients(const VectorX<Scalar>& beta) const {
    VectorX<Scalar> out = VectorX<Scalar>::Zero(beta.size());
    for (Eigen::Index j = 0; j < beta.size(); ++j) {
      if (active(j)) out(j) = beta(j) / scale(j);
    }
    return out;
  }

  Scalar intercept(const VectorX<Scalar>& beta) const {
    return y_mean - mean.dot(original_coefficients(beta));
  }
};

// Columns whose weighted variance vanishes are flagged kConstant; a column
// identical to an earlier active column is flagged kDuplicate. Flagged
// columns never enter a model.
template <typename Scalar>
StandardizedDesign<Scalar> standardize(const WeightedDesign<Scalar>& design) {
  design.validate();
  const Eigen::Index n = design.rows();
  const Eigen::Index m = design.cols();
  StandardizedDesign<Scalar> out;
  out.w = design.w;
  out.weight_sum = design.w.sum();
  out.mean = (design.X.transpose() * design.w) / out.weight_sum;
  out.y_mean = design.w.dot(design.y) / out.weight_sum;
  out.y = design.y.array() - out.y_mean;
  out.scale = VectorX<Scalar>::Ones(m);
  out.status.assign(m, ColumnStatus::kActive);
  out.X.resize(n, m);

  const Scalar variance_floor = Scalar(1e3) * std::numeric_limits<Scalar>::epsilon() *
                                std::numeric_limits<Scalar>::epsilon();
  std::unordered_map<std::uint64_t, std::vector<Eigen::Index>> buckets;
  for (Eigen::Index j = 0; j < m; ++j) {
    const auto col = design.X.col(j);
    const VectorX<Scalar> centered = col.array() - out.mean(j);
    const Scalar variance = design.w.dot(centered.cwiseAbs2()) / out.weight_sum;
    if (!(variance > variance_floor)) {
      out.status[j] = ColumnStatus::kConstant;
      out.X.col(j).setZero();
      continue;
    }
    // FNV-1a over the raw column bytes; collisions are resolved by comparison.
    std::uint64_t hash = 1469598103934665603ULL;
    for (Eigen::Index i = 0; i < n; ++i) {
      const Scalar v = col(i);
      const auto* bytes = reinterpret_cast<const unsigned char*>(&v);
      for (std::size_t b = 0; b < sizeof(Scalar); ++b) {
        hash = (hash ^ bytes[b]) * 1099511628211ULL;
      }
    }
    auto& bucket = buckets[hash];
    const bool duplicate = std::any_of(bucket.begin(), bucket.end(), [&](Eigen::Index k) {
      return design.X.col(k) == col;
    });
    if (duplicate) {
      out.status[j] = ColumnStatus::kDuplicate;
      out.X.col(j).setZero();
      continue;
    }
    bucket.push_back(j);
    out.scale(j) = std::sqrt(variance);
    out.X.col(j) = centered / out.scale(j);
  }
  return out;
}

struct LassoOptions {
  double tol = 1e-7;
  int max_iter = 10000;
};

template <typename Scalar>
struct LassoResult {
  VectorX<Scalar> beta;
  int iterations = 0;
};

// Raised when the sweep budget runs out; carries the last iterate.
class NotConverged : public Error {
 public:
  NotConverged(std::vector<double> partial, int iterations)
      : Error(ErrorCode::kNotConverged,
              "coordinate descent stopped after " + std::to_string(iterations) + " sweeps"),
        partial_(std::move(partial)),
        iterations_(iterations) {}

  const std::vector<double>& partial() const { return partial_; }
  int iterations() const { return iterations_; }

 private:
  std::vector<double> partial_;
  int iterations_;
};

inline double soft_threshold(double z, double gamma) {
  if (z > gamma) return z - gamma;
  if (z < -gamma) return z + gamma;
  return 0.0;
}

// Minimizes (1/(2 sum w)) sum_i w_i (y_i - x_i.beta)^2 + lambda |beta|_1 over
// a standardized design by cyclic coordinate descent.
template <typename Scalar>
class CoordinateDescentLasso {
 public:
  explicit CoordinateDescentLasso(const StandardizedDesign<Scalar>& design)
      : design_(&design) {
    const auto& X = design.X;
    const VectorX<Scalar> sw = design.w / design.weight_sum;
    gram_ = X.transpose() * sw.asDiagonal() * X;
    corr_ = X.transpose() * sw.cwiseProduct(design.y);
    y_energy_ = sw.dot(design.y.cwiseAbs2());
  }

  Eigen::Index cols() const { return corr_.size(); }

  // Smallest lambda with an all-zero solution.
  Scalar lambda_max() const {
    Scalar best = 0;
    for (Eigen::Index j = 0; j < cols(); ++j) {
      if (design_->active(j)) best = std::max(best, std::abs(corr_(j)));
    }
    return best;
  }

  // Gradient of the smooth part.
  VectorX<Scalar> gradient(const VectorX<Scalar>& beta) const { return gram_ * beta - corr_; }

  Scalar objective(const VectorX<Scalar>& beta, Scalar lambda) const {
    return Scalar(0.5) * (beta.dot(gram_ * beta) - Scalar(2) * corr_.dot(beta) + y_energy_) +
           lambda * beta.template lpNorm<1>();
  }

  // `trace`, when given, receives the objective after every sweep.
  LassoResult<Scalar> solve(Scalar lambda, VectorX<Scalar> beta, const LassoOptions& options = {},
                            std::vector<Scalar>* trace = nullptr) const {
    if (lambda < 0) throw Error(ErrorCode::kConfigError, "lambda must be non-negative");
    const Eigen::Index m = cols();
    if (beta.size() != m) beta = VectorX<Scalar>::Zero(m);
    VectorX<Scalar> q = gram_ * beta;  // running G * beta
    int sweeps = 0;

    const auto sweep = [&](bool active_only) {
      Scalar max_delta = 0;
      for (Eigen::Index j = 0; j < m; ++j) {
        if (!design_->active(j)) continue;
        if (active_only && beta(j) == Scalar(0)) continue;
        const Scalar gjj = gram_(j, j);
        const Scalar rho = corr_(j) - q(j) + gjj * beta(j);
        const Scalar updated = Scalar(soft_threshold(double(rho), double(lambda))) / gjj;
        const Scalar delta = updated - beta(j);
        if (delta != Scalar(0)) {
          q.noalias() += delta * gram_.col(j);
          beta(j) = updated;
          max_delta = std::max(max_delta, std::abs(delta));
        }
      }
      ++sweeps;
      if (trace != nullptr) trace->push_back(objective(beta, lambda));
      return max_delta;
    };

    while (sweeps < options.max_iter) {
      if (sweep(false) < options.tol) return {beta, sweeps};
      while (sweeps < options.max_iter) {
        if (sweep(true) < options.tol) break;
      }
    }
    throw NotConverged(std::vector<double>(beta.data(), beta.data() + beta.size()), sweeps);
  }

 private:
  const StandardizedDesign<Scalar>* design_;
  MatrixX<Scalar> gram_;
  VectorX<Scalar> corr_;
  Scalar y_energy_ = 0;
};

template <typename Scalar>
LassoResult<Scalar> lasso_cd(const StandardizedDesign<Scalar>& design, Scalar lambda,
                             const LassoOptions& options = {}) {
  return CoordinateDescentLasso<Scalar>(design).solve(lambda, VectorX<Scalar>(), options);
}

template <typename Scalar>
struct WlsFit {
  Scalar intercept = 0;
  VectorX<Scalar> coefficients;  // aligned with the requested columns
};

// Weighted least squares with intercept on the given columns. Columns are
// weighted-centered first, so the intercept is exact and a rank-deficient
// system resolves to the minimum-norm coefficient vector.
template <typename Scalar>
WlsFit<Scalar> weighted_lstsq(const WeightedDesign<Scalar>& design,
                              std::span<const Eigen::Index> columns) {
  design.validate();
  const Eigen::Index n = design.rows();
  const Eigen::Index k = static_cast<Eigen::Index>(columns.size());
  const Scalar wsum = design.w.sum();
  const Scalar y_mean = design.w.dot(design.y) / wsum;
  WlsFit<Scalar> fit;
  fit.coefficients = VectorX<Scalar>::Zero(k);
  if (k == 0) {
    fit.intercept = y_mean;
    return fit;
  }
  const VectorX<Scalar> sqrt_w = design.w.cwiseSqrt();
  MatrixX<Scalar> A(n, k);
  VectorX<Scalar> means(k);
  for (Eigen::Index c = 0; c < k; ++c) {
    const auto col = design.X.col(columns[c]);
    means(c) = design.w.dot(col) / wsum;
    A.col(c) = (col.array() - means(c)).matrix().cwiseProduct(sqrt_w);
  }
  const VectorX<Scalar> b = (design.y.array() - y_mean).matrix().cwiseProduct(sqrt_w);
  Eigen::CompleteOrthogonalDecomposition<MatrixX<Scalar>> cod(A);
  fit.coefficients = cod.solve(b);
  fit.intercept = y_mean - means.dot(fit.coefficients);
  return fit;
}

struct KLassoOptions {
  int path_length = 100;
  double min_ratio = 1e-4;  // lambda_min / lambda_max
  LassoOptions lasso;
};

template <typename Scalar>
struct LinearFit {
  Scalar intercept = 0;
  std::vector<Eigen::Index> columns;  // selected columns, ascending
  VectorX<Scalar> coefficients;       // aligned with `columns`
  Scalar r2 = 0;
  Scalar local_prediction = 0;        // model value on the all-ones row
  bool degenerate = false;            // no usable column
  bool converged = true;
  int path_index = -1;                // -1 when the path was skipped
  Scalar lambda = 0;
};

// Weighted coefficient of determination of `fit` on `design`.
template <typename Scalar>
Scalar weighted_r2(const WeightedDesign<Scalar>& design, const LinearFit<Scalar>& fit) {
  VectorX<Scalar> pred = VectorX<Scalar>::Constant(design.rows(), fit.intercept);
  for (std::size_t c = 0; c < fit.columns.size(); ++c) {
    pred += fit.coefficients(static_cast<Eigen::Index>(c)) * design.X.col(fit.columns[c]);
  }
  const Scalar wsum = design.w.sum();
  const Scalar y_mean = design.w.dot(design.y) / wsum;
  const Scalar ss_res = design.w.dot((design.y - pred).cwiseAbs2());
  const Scalar ss_tot = design.w.dot((design.y.array() - y_mean).matrix().cwiseAbs2());
  if (ss_tot <= Scalar(0)) return ss_res <= Scalar(1e-12) ? Scalar(1) : Scalar(0);
  return Scalar(1) - ss_res / ss_tot;
}

// Follows a geometric lambda path from lambda_max down to
// min_ratio * lambda_max, warm-starting each point, and keeps the earliest
// point whose support is the largest among points with at most K nonzeros.
// The survivors are refit by unpenalized weighted least squares.
template <typename Scalar>
LinearFit<Scalar> k_lasso(const WeightedDesign<Scalar>& design, int K,
                          const KLassoOptions& options = {}) {
  if (K < 1) throw Error(ErrorCode::kConfigError, "K must be at least 1");
  const StandardizedDesign<Scalar> std_design = standardize(design);
  LinearFit<Scalar> fit;

  std::vector<Eigen::Index> active;
  for (Eigen::Index j = 0; j < design.cols(); ++j) {
    if (std_design.active(j)) active.push_back(j);
  }

  std::vector<Eigen::Index> selected;
  if (active.empty()) {
    fit.degenerate = true;
  } else if (static_cast<std::size_t>(K) >= active.size()) {
    selected = active;
  } else {
    const CoordinateDescentLasso<Scalar> lasso(std_design);
    const Scalar lmax = lasso.lambda_max();
    const int steps = std::max(options.path_length, 1);
    const Scalar ratio =
        steps > 1 ? Scalar(std::pow(options.min_ratio, 1.0 / (steps - 1))) : Scalar(1);
    VectorX<Scalar> beta = VectorX<Scalar>::Zero(design.cols());
    int best_support = -1;
    Scalar lambda = lmax;
    for (int t = 0; t < steps && lmax > Scalar(0); ++t, lambda *= ratio) {
      try {
        beta = lasso.solve(lambda, beta, options.lasso).beta;
      } catch (const NotConverged& e) {
        beta = Eigen::Map<const VectorX<double>>(e.partial().data(),
                                                 static_cast<Eigen::Index>(e.partial().size()))
                   .template cast<Scalar>();
        fit.converged = false;
      }
      std::vector<Eigen::Index> support;
      for (Eigen::Index j = 0; j < beta.size(); ++j) {
        if (beta(j) != Scalar(0)) support.push_back(j);
      }
      const int count = static_cast<int>(support.size());
      if (count <= K && count > best_support) {
        best_support = count;
        selected = std::move(support);
        fit.path_index = t;
        fit.lambda = lambda;
        if (count == K) break;
      }
    }
  }

  const WlsFit<Scalar> wls = weighted_lstsq(design, std::span<const Eigen::Index>(selected));
  fit.columns = std::move(selected);
  fit.coefficients = wls.coefficients;
  fit.intercept = wls.intercept;
  fit.local_prediction = fit.intercept + fit.coefficients.sum();
  fit.r2 = weighted_r2(design, fit);
  return fit;
}

}  // namespace cle

#endif  // CLE_SOLVER_HPP_
