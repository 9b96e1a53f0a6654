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

#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "cle/solver.hpp"
#include "oracles.hpp"

namespace cle {
namespace {

TEST(Standardize, WeightedMeanAndFlags) {
  WeightedDesign<double> d;
  d.X.resize(2, 3);
  d.X << 1, 5, 1,
         0, 5, 0;
  d.y = Eigen::Vector2d(1, 0);
  d.w = Eigen::Vector2d(1, 1);
  const StandardizedDesign<double> s = standardize(d);
  EXPECT_DOUBLE_EQ(s.mean(0), 0.5);
  EXPECT_EQ(s.status[0], ColumnStatus::kActive);
  EXPECT_EQ(s.status[1], ColumnStatus::kConstant);
  EXPECT_EQ(s.status[2], ColumnStatus::kDuplicate);
}

TEST(Standardize, RoundTripPredictions) {
  std::mt19937_64 rng(1);
  for (int t = 0; t < 20; ++t) {
    const WeightedDesign<double> d = oracle::random_design(rng, 40, 5);
    const StandardizedDesign<double> s = standardize(d);
    Eigen::VectorXd beta(5);
    for (int j = 0; j < 5; ++j) beta(j) = 0.1 * (j + 1) - 0.2;
    const Eigen::VectorXd std_pred = s.X * beta + Eigen::VectorXd::Constant(40, s.y_mean);
    const Eigen::VectorXd orig_pred =
        d.X * s.original_coefficients(beta) + Eigen::VectorXd::Constant(40, s.intercept(beta));
    EXPECT_LT((std_pred - orig_pred).cwiseAbs().maxCoeff(), 1e-10);
  }
}

TEST(Lasso, ZeroPenaltyMatchesNormalEquations) {
  std::mt19937_64 rng(2);
  for (int t = 0; t < 100; ++t) {
    const int m = 1 + static_cast<int>(rng() % 10);
    const int n = m + 20 + static_cast<int>(rng() % 150);
    const WeightedDesign<double> d = oracle::random_design(rng, n, m);
    const StandardizedDesign<double> s = standardize(d);
    const Eigen::VectorXd beta = lasso_cd(s, 0.0).beta;
    const Eigen::VectorXd theta = oracle::normal_equations(d.X, d.y, d.w);
    EXPECT_LT((s.original_coefficients(beta) - theta.tail(m)).cwiseAbs().maxCoeff(), 1e-6);
    EXPECT_NEAR(s.intercept(beta), theta(0), 1e-6);
  }
}

TEST(Lasso, LambdaMaxGivesZero) {
  std::mt19937_64 rng(3);
  const WeightedDesign<double> d = oracle::random_design(rng, 60, 6);
  const StandardizedDesign<double> s = standardize(d);
  // Analytic lambda_max: max_j |sum_i w_i x_ij y_i| / sum w on the centered data.
  double lmax = 0;
  for (int j = 0; j < 6; ++j) {
    lmax = std::max(lmax, std::abs((s.w.array() * s.X.col(j).array() * s.y.array()).sum()) / s.w.sum());
  }
  EXPECT_NEAR(CoordinateDescentLasso<double>(s).lambda_max(), lmax, 1e-12);
  EXPECT_EQ(lasso_cd(s, lmax).beta.cwiseAbs().maxCoeff(), 0.0);
  EXPECT_GT(lasso_cd(s, 0.9 * lmax).beta.cwiseAbs().maxCoeff(), 0.0);
}

TEST(Lasso, SingleFeatureSoftThreshold) {
  std::mt19937_64 rng(4);
  const WeightedDesign<double> d = oracle::random_design(rng, 30, 1);
  const StandardizedDesign<double> s = standardize(d);
  // One unit-variance column: beta = S(x'Wy / sum w, lambda).
  const double z = (s.w.array() * s.X.col(0).array() * s.y.array()).sum() / s.w.sum();
  for (double lambda : {0.0, 0.1, 0.5, 2.0}) {
    const double expect = std::copysign(std::max(std::abs(z) - lambda, 0.0), z);
    EXPECT_NEAR(lasso_cd(s, lambda).beta(0), expect, 1e-12);
  }
}

TEST(Lasso, KktAndDescent) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> frac(0.01, 0.9);
  for (int t = 0; t < 30; ++t) {
    const WeightedDesign<double> d = oracle::random_design(rng, 120, 12);
    const StandardizedDesign<double> s = standardize(d);
    const CoordinateDescentLasso<double> cd(s);
    const double lambda = frac(rng) * cd.lambda_max();
    std::vector<double> trace;
    const Eigen::VectorXd beta = cd.solve(lambda, Eigen::VectorXd(), {}, &trace).beta;
    const Eigen::VectorXd g = cd.gradient(beta);
    for (int j = 0; j < 12; ++j) {
      if (beta(j) != 0) {
        EXPECT_LT(std::abs(g(j) + lambda * (beta(j) > 0 ? 1 : -1)), 1e-6);
      } else {
        EXPECT_LE(std::abs(g(j)), lambda + 1e-6);
      }
    }
    for (std::size_t i = 1; i < trace.size(); ++i) EXPECT_LE(trace[i], trace[i - 1] + 1e-15);
  }
}

TEST(Lasso, NotConvergedCarriesIterate) {
  std::mt19937_64 rng(6);
  const WeightedDesign<double> d = oracle::random_design(rng, 50, 8);
  const StandardizedDesign<double> s = standardize(d);
  try {
    lasso_cd(s, 0.0, LassoOptions{1e-30, 2});
    FAIL();
  } catch (const NotConverged& e) {
    EXPECT_EQ(e.iterations(), 2);
    EXPECT_EQ(e.partial().size(), 8u);
  }
}

TEST(Wls, SingleColumnIdentity) {
  WeightedDesign<double> d;
  d.X.resize(4, 1);
  d.X << 0, 1, 1, 0;
  d.y = d.X.col(0);
  d.w = Eigen::Vector4d(1, 2, 3, 4);
  const std::vector<Eigen::Index> cols{0};
  const WlsFit<double> f = weighted_lstsq(d, std::span<const Eigen::Index>(cols));
  EXPECT_NEAR(f.coefficients(0), 1.0, 1e-12);
  EXPECT_NEAR(f.intercept, 0.0, 1e-12);
}

TEST(Wls, OrthogonalColumnsDecouple) {
  // Columns centered and orthogonal under w: each coefficient equals its
  // own single-column regression.
  WeightedDesign<double> d;
  d.X.resize(4, 2);
  d.X << 1, 1,
         1, -1,
        -1, 1,
        -1, -1;
  d.y = Eigen::Vector4d(3, 1, 0.5, -2);
  d.w = Eigen::Vector4d::Ones();
  const std::vector<Eigen::Index> both{0, 1}, first{0}, second{1};
  const auto f = weighted_lstsq(d, std::span<const Eigen::Index>(both));
  EXPECT_NEAR(f.coefficients(0), weighted_lstsq(d, std::span<const Eigen::Index>(first)).coefficients(0), 1e-12);
  EXPECT_NEAR(f.coefficients(1), weighted_lstsq(d, std::span<const Eigen::Index>(second)).coefficients(0), 1e-12);
}

TEST(Wls, DuplicateColumnsSplitEqually) {
  WeightedDesign<double> d;
  d.X.resize(4, 2);
  d.X << 0, 0, 1, 1, 0, 0, 1, 1;
  d.y = Eigen::Vector4d(0, 2, 0, 2);
  d.w = Eigen::Vector4d::Ones();
  const std::vector<Eigen::Index> cols{0, 1};
  const auto f = weighted_lstsq(d, std::span<const Eigen::Index>(cols));
  EXPECT_NEAR(f.coefficients(0), 1.0, 1e-10);
  EXPECT_NEAR(f.coefficients(1), 1.0, 1e-10);
}

TEST(KLasso, PlantedTwoOfTen) {
  std::mt19937_64 rng(7);
  std::bernoulli_distribution coin(0.5);
  WeightedDesign<double> d;
  d.X.resize(300, 10);
  for (int i = 0; i < 300; ++i) {
    for (int j = 0; j < 10; ++j) d.X(i, j) = coin(rng);
  }
  d.y = 0.2 + 0.6 * d.X.col(3).array() - 0.4 * d.X.col(7).array();
  d.w = Eigen::VectorXd::Constant(300, 0.5);
  const LinearFit<double> f = k_lasso(d, 2);
  ASSERT_EQ(f.columns, (std::vector<Eigen::Index>{3, 7}));
  EXPECT_NEAR(f.coefficients(0), 0.6, 1e-6);
  EXPECT_NEAR(f.coefficients(1), -0.4, 1e-6);
  EXPECT_NEAR(f.intercept, 0.2, 1e-6);
  EXPECT_NEAR(f.local_prediction, f.intercept + f.coefficients.sum(), 1e-12);
}

TEST(KLasso, LargeKIsFullLeastSquares) {
  std::mt19937_64 rng(8);
  const WeightedDesign<double> d = oracle::random_design(rng, 80, 6);
  const LinearFit<double> f = k_lasso(d, 10);
  const Eigen::VectorXd theta = oracle::normal_equations(d.X, d.y, d.w);
  EXPECT_EQ(f.columns.size(), 6u);
  EXPECT_LT((f.coefficients - theta.tail(6)).cwiseAbs().maxCoeff(), 1e-8);
}

TEST(KLasso, AtMostKAndDuplicateTieToLowestIndex) {
  std::mt19937_64 rng(9);
  std::bernoulli_distribution coin(0.5);
  WeightedDesign<double> d;
  d.X.resize(200, 6);
  for (int i = 0; i < 200; ++i) {
    for (int j = 0; j < 5; ++j) d.X(i, j) = coin(rng);
  }
  d.X.col(5) = d.X.col(2);
  d.y = 0.7 * d.X.col(2).array() + 0.1 * d.X.col(0).array();
  d.w = Eigen::VectorXd::Ones(200);
  for (int K = 1; K <= 4; ++K) {
    const LinearFit<double> f = k_lasso(d, K);
    EXPECT_LE(static_cast<int>(f.columns.size()), K);
    EXPECT_EQ(std::count(f.columns.begin(), f.columns.end(), 5), 0);
    EXPECT_EQ(std::count(f.columns.begin(), f.columns.end(), 2), 1);
  }
}

TEST(KLasso, AllConstantIsDegenerate) {
  WeightedDesign<double> d;
  d.X = Eigen::MatrixXd::Ones(5, 3);
  d.y = Eigen::VectorXd::LinSpaced(5, 0, 1);
  d.w = Eigen::VectorXd::Ones(5);
  const LinearFit<double> f = k_lasso(d, 2);
  EXPECT_TRUE(f.degenerate);
  EXPECT_TRUE(f.columns.empty());
  EXPECT_NEAR(f.intercept, 0.5, 1e-12);
}

TEST(KLasso, FloatScalarAgrees) {
  std::mt19937_64 rng(10);
  const WeightedDesign<double> d = oracle::random_design(rng, 100, 5);
  WeightedDesign<float> f;
  f.X = d.X.cast<float>();
  f.y = d.y.cast<float>();
  f.w = d.w.cast<float>();
  const auto a = k_lasso(d, 3);
  KLassoOptions options;
  options.lasso.tol = 1e-5;
  const auto b = k_lasso(f, 3, options);
  ASSERT_EQ(a.columns, b.columns);
  EXPECT_LT((a.coefficients.cast<float>() - b.coefficients).cwiseAbs().maxCoeff(), 1e-3f);
}

}  // namespace
}  // namespace cle
