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

#ifndef CLE_TESTS_ORACLES_HPP_
#define CLE_TESTS_ORACLES_HPP_

// Independent reference computations shared by the unit and acceptance tests.

#include <algorithm>
#include <cmath>
#include <memory>
#include <random>
#include <vector>

#include <Eigen/Dense>

#include "cle/models.hpp"
#include "cle/repr.hpp"
#include "cle/solver.hpp"

namespace cle::oracle {

// Weighted least squares with intercept from the normal equations of the
// augmented design [1 X]: (A^T W A) theta = A^T W y. theta(0) is the intercept.
inline Eigen::VectorXd normal_equations(const Eigen::MatrixXd& X, const Eigen::VectorXd& y,
                                        const Eigen::VectorXd& w) {
  Eigen::MatrixXd A(X.rows(), X.cols() + 1);
  A.col(0).setOnes();
  A.rightCols(X.cols()) = X;
  const Eigen::MatrixXd AtW = A.transpose() * w.asDiagonal();
  return (AtW * A).fullPivLu().solve(AtW * y);
}

// Gaussian design with n rows and m columns, weights in [0.1, 1].
inline WeightedDesign<double> random_design(std::mt19937_64& rng, int n, int m) {
  std::normal_distribution<double> g(0.0, 1.0);
  std::uniform_real_distribution<double> u(0.1, 1.0);
  WeightedDesign<double> d;
  d.X.resize(n, m);
  d.y.resize(n);
  d.w.resize(n);
  Eigen::VectorXd beta(m);
  for (int j = 0; j < m; ++j) beta(j) = g(rng);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < m; ++j) d.X(i, j) = g(rng) + 0.3 * j;
    d.w(i) = u(rng);
  }
  d.y = d.X * beta + 0.5 * Eigen::VectorXd::NullaryExpr(n, [&] { return g(rng); });
  d.y.array() += 0.7;
  return d;
}

// ext[n] = product of the member bits.
inline Bits brute_force_and(const Bits& bits, const std::vector<std::vector<int>>& tuples) {
  Bits out;
  for (const auto& t : tuples) {
    int v = 1;
    for (int j : t) v *= bits[j];
    out.push_back(static_cast<std::uint8_t>(v));
  }
  return out;
}

// All size-b subsets of `focus` by recursive search, in lexicographic order
// of positions.
inline void subsets(const std::vector<int>& focus, int b, std::size_t start, std::vector<int>& cur,
                    std::vector<std::vector<int>>& out) {
  if (static_cast<int>(cur.size()) == b) {
    out.push_back(cur);
    return;
  }
  for (std::size_t i = start; i < focus.size(); ++i) {
    cur.push_back(focus[i]);
    subsets(focus, b, i + 1, cur, out);
    cur.pop_back();
  }
}

// Exhaustive two-token text model: p(class 1) = 1 iff exactly one of the
// tokens "a" and "b" is present.
inline std::shared_ptr<FunctionModel> xor_model() {
  return std::make_shared<FunctionModel>(
      Modality::kText, std::vector<std::string>{"zero", "one"}, [](const Instance& x) {
        const std::string& text = std::get<std::string>(x);
        bool a = false, b = false;
        for (const Token& t : tokenize(text)) {
          a |= t.text == "a";
          b |= t.text == "b";
        }
        const double p = (a != b) ? 1.0 : 0.0;
        return std::vector<double>{1.0 - p, p};
      });
}

// Two-class text model additive over the tokens "t0".."t{d-1}" with the
// given weights on top of `base`, clipped to [0, 1].
inline std::shared_ptr<FunctionModel> additive_text_model(std::vector<double> weights,
                                                          double base,
                                                          std::vector<std::pair<std::pair<int, int>, double>>
                                                              pairs = {}) {
  return std::make_shared<FunctionModel>(
      Modality::kText, std::vector<std::string>{"neg", "pos"},
      [weights, base, pairs](const Instance& x) {
        std::vector<int> on(weights.size(), 0);
        for (const Token& t : tokenize(std::get<std::string>(x))) {
          if (t.text.size() > 1 && t.text[0] == 't') {
            const int j = std::stoi(t.text.substr(1));
            if (j >= 0 && j < static_cast<int>(on.size())) on[j] = 1;
          }
        }
        double p = base;
        for (std::size_t j = 0; j < on.size(); ++j) p += weights[j] * on[j];
        for (const auto& [ij, w] : pairs) p += w * on[ij.first] * on[ij.second];
        p = std::clamp(p, 0.0, 1.0);
        return std::vector<double>{1.0 - p, p};
      });
}

inline std::string token_doc(int d) {
  std::string s;
  for (int j = 0; j < d; ++j) s += (j ? " t" : "t") + std::to_string(j);
  return s;
}

}  // namespace cle::oracle

#endif  // CLE_TESTS_ORACLES_HPP_
