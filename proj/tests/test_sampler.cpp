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
#include <map>

#include "cle/error.hpp"
#include "cle/sampler.hpp"

namespace cle {
namespace {

TEST(Perturb, AnchorAndSupport) {
  const Bits x{1};
  const std::vector<Bits> s = perturb(x, 200, 5);
  EXPECT_EQ(s[0], x);
  bool saw_zero = false;
  for (const Bits& b : s) {
    ASSERT_EQ(b.size(), 1u);
    saw_zero |= b[0] == 0;
  }
  EXPECT_TRUE(saw_zero);
}

TEST(Perturb, Deterministic) {
  const Bits x(9, 1);
  EXPECT_EQ(perturb(x, 100, 42), perturb(x, 100, 42));
  EXPECT_NE(perturb(x, 100, 42), perturb(x, 100, 43));
}

TEST(Perturb, NeverSwitchesZerosOn) {
  const Bits x{1, 0, 1, 0, 1};
  for (const Bits& b : perturb(x, 500, 1)) {
    EXPECT_EQ(b[1], 0);
    EXPECT_EQ(b[3], 0);
  }
}

TEST(Perturb, PerBitZeroFrequencyIsOneHalf) {
  // k ~ U{0..d} then a uniform k-subset: P(bit off) = E[k]/d = 1/2.
  const int d = 10;
  const std::vector<Bits> s = perturb(Bits(d, 1), 50000, 9);
  for (int j = 0; j < d; ++j) {
    int off = 0;
    for (std::size_t i = 1; i < s.size(); ++i) off += s[i][j] == 0;
    EXPECT_NEAR(off / double(s.size() - 1), 0.5, 0.02);
  }
}

TEST(Perturb, PatternDistributionMatchesTwoStageScheme) {
  // P(pattern with z zeros) = 1/(d+1) * 1/choose(d, z).
  const int d = 3, n = 80001;
  const std::vector<Bits> s = perturb(Bits(d, 1), n, 17);
  std::map<int, int> counts;
  for (std::size_t i = 1; i < s.size(); ++i) counts[s[i][0] * 4 + s[i][1] * 2 + s[i][2]]++;
  const int binom[] = {1, 3, 3, 1};
  double chi2 = 0;
  for (int p = 0; p < 8; ++p) {
    const int zeros = 3 - __builtin_popcount(p);
    const double expect = (n - 1) / double(d + 1) / binom[zeros];
    chi2 += std::pow(counts[p] - expect, 2) / expect;
  }
  EXPECT_LT(chi2, 24.3);  // chi-square 7 dof, p = 0.001
}

TEST(Distance, CosineExamples) {
  const Bits x(4, 1);
  EXPECT_DOUBLE_EQ(distance(x, x, DistanceMetric::kCosine), 0.0);
  EXPECT_NEAR(distance(x, Bits{1, 1, 0, 0}, DistanceMetric::kCosine), 1 - 2 / (2 * std::sqrt(2.0)), 1e-12);
  EXPECT_NEAR(distance(x, Bits{1, 1, 0, 0}, DistanceMetric::kCosine), 0.29289, 1e-5);
  EXPECT_DOUBLE_EQ(distance(x, Bits(4, 0), DistanceMetric::kCosine), 1.0);
  EXPECT_THROW(distance(x, Bits(3, 1), DistanceMetric::kCosine), Error);
}

TEST(Distance, EuclideanNormalized) {
  EXPECT_DOUBLE_EQ(distance(Bits(4, 1), Bits{1, 1, 0, 0}, DistanceMetric::kEuclideanNormalized),
                   std::sqrt(2.0) / 2.0);
}

TEST(Kernel, Examples) {
  KernelConfig k;
  k.sigma = 0.25;
  EXPECT_DOUBLE_EQ(kernel_weight(0, k), 1.0);
  EXPECT_NEAR(kernel_weight(0.25, k), std::exp(-1.0), 1e-12);
  EXPECT_NEAR(kernel_weight(0.29289, k), 0.253459, 1e-6);
  double last = 1;
  for (double dist = 0; dist < 2; dist += 0.05) {
    EXPECT_LE(kernel_weight(dist, k), last);
    last = kernel_weight(dist, k);
  }
}

TEST(Kernel, ModalityDefaults) {
  EXPECT_EQ(KernelConfig::for_modality(Modality::kText).sigma, 0.25);
  EXPECT_EQ(KernelConfig::for_modality(Modality::kImage).metric, DistanceMetric::kCosine);
  EXPECT_EQ(KernelConfig::for_modality(Modality::kTabular).sigma, 0.75);
  EXPECT_EQ(KernelConfig::for_modality(Modality::kTabular).metric, DistanceMetric::kEuclideanNormalized);
}

}  // namespace
}  // namespace cle
