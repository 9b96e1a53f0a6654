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

#include "cle/sampler.hpp"

#include <cmath>
#include <numeric>

#include "cle/error.hpp"

namespace cle {

KernelConfig KernelConfig::for_modality(Modality modality) {
  if (modality == Modality::kTabular) return {0.75, DistanceMetric::kEuclideanNormalized};
  return {0.25, DistanceMetric::kCosine};
}

std::vector<Bits> perturb(std::span<const std::uint8_t> x, int n, std::uint64_t seed) {
  if (n < 1) throw Error(ErrorCode::kConfigError, "perturb needs n >= 1");
  std::vector<int> ones;
  for (std::size_t j = 0; j < x.size(); ++j) {
    if (x[j] != 0) ones.push_back(static_cast<int>(j));
  }
  Rng rng(seed);
  std::uniform_int_distribution<int> count(0, static_cast<int>(ones.size()));
  std::vector<Bits> samples;
  samples.reserve(n);
  samples.emplace_back(x.begin(), x.end());
  std::vector<int> pool = ones;
  for (int i = 1; i < n; ++i) {
    Bits p(x.begin(), x.end());
    const int k = count(rng);
    // Partial Fisher-Yates: the first k entries become a uniform k-subset.
    for (int t = 0; t < k; ++t) {
      std::uniform_int_distribution<int> pick(t, static_cast<int>(pool.size()) - 1);
      std::swap(pool[t], pool[pick(rng)]);
      p[pool[t]] = 0;
    }
    samples.push_back(std::move(p));
  }
  return samples;
}

double distance(std::span<const std::uint8_t> x, std::span<const std::uint8_t> p,
                DistanceMetric metric) {
  if (x.size() != p.size()) {
    throw Error(ErrorCode::kLengthMismatch, "distance between vectors of different length");
  }
  if (metric == DistanceMetric::kCosine) {
    double dot = 0, nx = 0, np = 0;
    for (std::size_t j = 0; j < x.size(); ++j) {
      dot += static_cast<double>(x[j]) * p[j];
      nx += static_cast<double>(x[j]) * x[j];
      np += static_cast<double>(p[j]) * p[j];
    }
    if (nx == 0 || np == 0) return 1.0;
    return std::max(0.0, 1.0 - dot / (std::sqrt(nx) * std::sqrt(np)));
  }
  if (x.empty()) return 0.0;
  double sq = 0;
  for (std::size_t j = 0; j < x.size(); ++j) {
    const double diff = static_cast<double>(x[j]) - p[j];
    sq += diff * diff;
  }
  return std::sqrt(sq) / std::sqrt(static_cast<double>(x.size()));
}

}  // namespace cle
