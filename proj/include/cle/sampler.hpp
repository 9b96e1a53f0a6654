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

#ifndef CLE_SAMPLER_HPP_
#define CLE_SAMPLER_HPP_

#include <cmath>
#include <cstdint>
#include <span>
#include <vector>

#include <Eigen/Core>

#include "cle/instance.hpp"

namespace cle {

enum class DistanceMetric { kCosine, kEuclideanNormalized };

struct KernelConfig {
  double sigma = 0.25;
  DistanceMetric metric = DistanceMetric::kCosine;

  // Cosine with sigma 0.25 for text and images, normalized Euclidean with
  // sigma 0.75 for tabular rows.
  static KernelConfig for_modality(Modality modality);
};

// Sample 0 is `x` itself. Every later sample draws k uniformly from
// {0..ones(x)} and switches off a uniformly random k-subset of x's ones.
std::vector<Bits> perturb(std::span<const std::uint8_t> x, int n, std::uint64_t seed);

// Cosine: 1 - <x,p>/(|x||p|), 1 when either vector is all zeros.
// Euclidean-normalized: |x-p|_2 / sqrt(d).
double distance(std::span<const std::uint8_t> x, std::span<const std::uint8_t> p,
                DistanceMetric metric);

// exp(-dist^2 / sigma^2)
inline double kernel_weight(double dist, const KernelConfig& cfg) {
  return std::exp(-(dist * dist) / (cfg.sigma * cfg.sigma));
}

struct PerturbationBatch {
  std::vector<Bits> samples;
  std::vector<Bits> extended;  // empty unless combinations were requested
  Eigen::VectorXd weights;
  Eigen::VectorXd outputs;     // black-box probability of the explained class
  std::uint64_t seed = 0;

  int size() const { return static_cast<int>(samples.size()); }
};

}  // namespace cle

#endif  // CLE_SAMPLER_HPP_
