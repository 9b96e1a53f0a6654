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

#ifndef CLE_IMAGE_HPP_
#define CLE_IMAGE_HPP_

#include <array>
#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "cle/instance.hpp"

namespace cle {

// Per-pixel segment ids in [0, segment_count), row-major.
struct SegmentMap {
  int width = 0;
  int height = 0;
  int segment_count = 0;
  std::vector<int> ids;

  int at(int x, int y) const {
    return ids[static_cast<std::size_t>(y) * width + x];
  }

  // Throws DimensionMismatch / SpecInvalid when ids are not contiguous.
  void validate() const;
};

// Splits width x height into rows x cols rectangles. Each segment is
// floor(extent / count) wide; the last row and column absorb the remainder.
SegmentMap grid_segments(int width, int height, int rows, int cols);

// Builds a SegmentMap from raw per-pixel labels, checking contiguity.
SegmentMap make_segment_map(int width, int height, std::vector<int> ids);

// Per-channel mean of each segment, rounded half up.
std::vector<std::array<std::uint8_t, 3>> segment_mean_colors(
    const Image& image, const SegmentMap& segments);

// Netpbm IO. P3/P6 for color images; P2/P5 for segment maps where the gray
// value is the segment id.
Image decode_ppm(std::string_view bytes);
std::string encode_ppm(const Image& image);  // binary P6
Image read_ppm(const std::filesystem::path& path);
void write_ppm(const std::filesystem::path& path, const Image& image);
SegmentMap decode_pgm_segments(std::string_view bytes);
SegmentMap read_pgm_segments(const std::filesystem::path& path);

std::string base64_encode(std::string_view bytes);
std::string base64_decode(std::string_view text);

}  // namespace cle

#endif  // CLE_IMAGE_HPP_
