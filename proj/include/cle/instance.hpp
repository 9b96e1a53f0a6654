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

#ifndef CLE_INSTANCE_HPP_
#define CLE_INSTANCE_HPP_

#include <cstddef>
#include <cstdint>
#include <random>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace cle {

enum class Modality { kText, kTabular, kImage };

std::string_view modality_name(Modality modality);

// Presence vector over interpretable units.
using Bits = std::vector<std::uint8_t>;

using Rng = std::mt19937_64;

// splitmix64 finalizer; used to derive independent per-item seeds.
constexpr std::uint64_t mix_seed(std::uint64_t master, std::uint64_t stream) {
  std::uint64_t z = master + 0x9E3779B97F4A7C15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

using TabularValue = std::variant<double, std::string>;

struct TabularRow {
  std::vector<TabularValue> values;

  bool operator==(const TabularRow&) const = default;
};

// Interleaved 8-bit RGB raster.
struct Image {
  int width = 0;
  int height = 0;
  std::vector<std::uint8_t> rgb;

  Image() = default;
  Image(int w, int h)
      : width(w), height(h), rgb(static_cast<std::size_t>(w) * h * 3, 0) {}

  std::uint8_t& at(int x, int y, int channel) {
    return rgb[(static_cast<std::size_t>(y) * width + x) * 3 + channel];
  }
  std::uint8_t at(int x, int y, int channel) const {
    return rgb[(static_cast<std::size_t>(y) * width + x) * 3 + channel];
  }

  bool operator==(const Image&) const = default;
};

// A raw instance in the black box's own representation.
using Instance = std::variant<std::string, TabularRow, Image>;

inline Modality modality_of(const Instance& instance) {
  switch (instance.index()) {
    case 0: return Modality::kText;
    case 1: return Modality::kTabular;
    default: return Modality::kImage;
  }
}

inline std::string_view modality_name(Modality modality) {
  switch (modality) {
    case Modality::kText: return "text";
    case Modality::kTabular: return "tabular";
    case Modality::kImage: return "image";
  }
  return "unknown";
}

}  // namespace cle

#endif  // CLE_INSTANCE_HPP_
