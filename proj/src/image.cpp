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

#include "cle/image.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>

#include "cle/error.hpp"

namespace cle {

void SegmentMap::validate() const {
  if (width <= 0 || height <= 0 ||
      ids.size() != static_cast<std::size_t>(width) * height) {
    throw Error(ErrorCode::kDimensionMismatch, "segment map size mismatch");
  }
  std::vector<char> seen(static_cast<std::size_t>(segment_count), 0);
  for (int id : ids) {
    if (id < 0 || id >= segment_count) {
      throw Error(ErrorCode::kSpecInvalid, "segment id out of range");
    }
    seen[id] = 1;
  }
  if (std::find(seen.begin(), seen.end(), 0) != seen.end()) {
    throw Error(ErrorCode::kSpecInvalid, "segment ids are not contiguous");
  }
}

SegmentMap grid_segments(int width, int height, int rows, int cols) {
  if (width <= 0 || height <= 0 || rows <= 0 || cols <= 0 || rows > height ||
      cols > width) {
    throw Error(ErrorCode::kDimensionMismatch,
                "grid " + std::to_string(rows) + "x" + std::to_string(cols) +
                    " does not fit image " + std::to_string(width) + "x" +
                    std::to_string(height));
  }
  const int cell_h = height / rows;
  const int cell_w = width / cols;
  SegmentMap map;
  map.width = width;
  map.height = height;
  map.segment_count = rows * cols;
  map.ids.resize(static_cast<std::size_t>(width) * height);
  for (int y = 0; y < height; ++y) {
    const int r = std::min(y / cell_h, rows - 1);
    for (int x = 0; x < width; ++x) {
      const int c = std::min(x / cell_w, cols - 1);
      map.ids[static_cast<std::size_t>(y) * width + x] = r * cols + c;
    }
  }
  return map;
}

SegmentMap make_segment_map(int width, int height, std::vector<int> ids) {
  SegmentMap map;
  map.width = width;
  map.height = height;
  map.ids = std::move(ids);
  map.segment_count =
      map.ids.empty() ? 0 : *std::max_element(map.ids.begin(), map.ids.end()) + 1;
  map.validate();
  return map;
}

std::vector<std::array<std::uint8_t, 3>> segment_mean_colors(
    const Image& image, const SegmentMap& segments) {
  if (image.width != segments.width || image.height != segments.height) {
    throw Error(ErrorCode::kDimensionMismatch,
                "segment map does not match image dimensions");
  }
  std::vector<std::array<std::uint64_t, 3>> sums(segments.segment_count,
                                                 {0, 0, 0});
  std::vector<std::uint64_t> counts(segments.segment_count, 0);
  for (int y = 0; y < image.height; ++y) {
    for (int x = 0; x < image.width; ++x) {
      const int s = segments.at(x, y);
      ++counts[s];
      for (int c = 0; c < 3; ++c) sums[s][c] += image.at(x, y, c);
    }
  }
  std::vector<std::array<std::uint8_t, 3>> means(segments.segment_count);
  for (int s = 0; s < segments.segment_count; ++s) {
    for (int c = 0; c < 3; ++c) {
      // floor(sum / n + 1/2) in integer arithmetic.
      means[s][c] = counts[s] == 0 ? 0
                                   : static_cast<std::uint8_t>(
                                         (2 * sums[s][c] + counts[s]) /
                                         (2 * counts[s]));
    }
  }
  return means;
}

namespace {

class NetpbmReader {
 public:
  explicit NetpbmReader(std::string_view bytes) : bytes_(bytes) {}

  std::string magic() {
    if (bytes_.size() < 2 || bytes_[0] != 'P') {
      throw Error(ErrorCode::kIoError, "not a netpbm file");
    }
    pos_ = 2;
    return std::string(bytes_.substr(0, 2));
  }

  long next_int() {
    skip_space_and_comments();
    if (pos_ >= bytes_.size() || !std::isdigit(static_cast<unsigned char>(bytes_[pos_]))) {
      throw Error(ErrorCode::kIoError, "malformed netpbm header");
    }
    long value = 0;
    while (pos_ < bytes_.size() &&
           std::isdigit(static_cast<unsigned char>(bytes_[pos_]))) {
      value = value * 10 + (bytes_[pos_] - '0');
      if (value > (1L << 30)) throw Error(ErrorCode::kIoError, "netpbm value too large");
      ++pos_;
    }
    return value;
  }

  // Binary rasters start after exactly one whitespace byte.
  std::string_view raster() {
    if (pos_ >= bytes_.size()) throw Error(ErrorCode::kIoError, "truncated netpbm");
    return bytes_.substr(pos_ + 1);
  }

 private:
  void skip_space_and_comments() {
    while (pos_ < bytes_.size()) {
      const char ch = bytes_[pos_];
      if (ch == '#') {
        while (pos_ < bytes_.size() && bytes_[pos_] != '\n') ++pos_;
      } else if (std::isspace(static_cast<unsigned char>(ch))) {
        ++pos_;
      } else {
        break;
      }
    }
  }

  std::string_view bytes_;
  std::size_t pos_ = 0;
};

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIoError, "cannot open " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

std::uint8_t scale_sample(long value, long maxval) {
  if (value > maxval) throw Error(ErrorCode::kIoError, "sample exceeds maxval");
  return static_cast<std::uint8_t>(maxval == 255 ? value : (value * 255 + maxval / 2) / maxval);
}

}  // namespace

Image decode_ppm(std::string_view bytes) {
  NetpbmReader reader(bytes);
  const std::string magic = reader.magic();
  if (magic != "P3" && magic != "P6") {
    throw Error(ErrorCode::kIoError, "expected P3 or P6, got " + magic);
  }
  const long w = reader.next_int();
  const long h = reader.next_int();
  const long maxval = reader.next_int();
  if (w <= 0 || h <= 0 || maxval <= 0 || maxval > 65535) {
    throw Error(ErrorCode::kIoError, "bad PPM header");
  }
  Image image(static_cast<int>(w), static_cast<int>(h));
  const std::size_t count = image.rgb.size();
  if (magic == "P3") {
    for (std::size_t i = 0; i < count; ++i) {
      image.rgb[i] = scale_sample(reader.next_int(), maxval);
    }
  } else {
    const std::string_view raster = reader.raster();
    const std::size_t width = maxval > 255 ? 2 : 1;
    if (raster.size() < count * width) throw Error(ErrorCode::kIoError, "truncated PPM raster");
    for (std::size_t i = 0; i < count; ++i) {
      long v = static_cast<unsigned char>(raster[i * width]);
      if (width == 2) v = (v << 8) | static_cast<unsigned char>(raster[i * 2 + 1]);
      image.rgb[i] = scale_sample(v, maxval);
    }
  }
  return image;
}

std::string encode_ppm(const Image& image) {
  std::string out = "P6\n" + std::to_string(image.width) + " " +
                    std::to_string(image.height) + "\n255\n";
  out.append(reinterpret_cast<const char*>(image.rgb.data()), image.rgb.size());
  return out;
}

Image read_ppm(const std::filesystem::path& path) { return decode_ppm(read_file(path)); }

void write_ppm(const std::filesystem::path& path, const Image& image) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::kIoError, "cannot write " + path.string());
  const std::string bytes = encode_ppm(image);
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
}

SegmentMap decode_pgm_segments(std::string_view bytes) {
  NetpbmReader reader(bytes);
  const std::string magic = reader.magic();
  if (magic != "P2" && magic != "P5") {
    throw Error(ErrorCode::kIoError, "expected P2 or P5, got " + magic);
  }
  const long w = reader.next_int();
  const long h = reader.next_int();
  const long maxval = reader.next_int();
  if (w <= 0 || h <= 0 || maxval <= 0 || maxval > 65535) {
    throw Error(ErrorCode::kIoError, "bad PGM header");
  }
  std::vector<int> ids(static_cast<std::size_t>(w) * h);
  if (magic == "P2") {
    for (auto& id : ids) id = static_cast<int>(reader.next_int());
  } else {
    const std::string_view raster = reader.raster();
    const std::size_t width = maxval > 255 ? 2 : 1;
    if (raster.size() < ids.size() * width) throw Error(ErrorCode::kIoError, "truncated PGM raster");
    for (std::size_t i = 0; i < ids.size(); ++i) {
      int v = static_cast<unsigned char>(raster[i * width]);
      if (width == 2) v = (v << 8) | static_cast<unsigned char>(raster[i * 2 + 1]);
      ids[i] = v;
    }
  }
  return make_segment_map(static_cast<int>(w), static_cast<int>(h), std::move(ids));
}

SegmentMap read_pgm_segments(const std::filesystem::path& path) {
  return decode_pgm_segments(read_file(path));
}

namespace {
constexpr std::string_view kBase64Alphabet =
    "ABCDEFGHIJKLMNOPQRSTUVWXYZabcdefghijklmnopqrstuvwxyz0123456789+/";
}

std::string base64_encode(std::string_view bytes) {
  std::string out;
  out.reserve((bytes.size() + 2) / 3 * 4);
  std::size_t i = 0;
  for (; i + 2 < bytes.size(); i += 3) {
    const std::uint32_t n = (static_cast<unsigned char>(bytes[i]) << 16) |
                            (static_cast<unsigned char>(bytes[i + 1]) << 8) |
                            static_cast<unsigned char>(bytes[i + 2]);
    out += kBase64Alphabet[(n >> 18) & 63];
    out += kBase64Alphabet[(n >> 12) & 63];
    out += kBase64Alphabet[(n >> 6) & 63];
    out += kBase64Alphabet[n & 63];
  }
  const std::size_t rest = bytes.size() - i;
  if (rest > 0) {
    std::uint32_t n = static_cast<unsigned char>(bytes[i]) << 16;
    if (rest == 2) n |= static_cast<unsigned char>(bytes[i + 1]) << 8;
    out += kBase64Alphabet[(n >> 18) & 63];
    out += kBase64Alphabet[(n >> 12) & 63];
    out += rest == 2 ? kBase64Alphabet[(n >> 6) & 63] : '=';
    out += '=';
  }
  return out;
}

std::string base64_decode(std::string_view text) {
  std::string out;
  std::uint32_t buffer = 0;
  int bits = 0;
  for (char ch : text) {
    if (ch == '=' || std::isspace(static_cast<unsigned char>(ch))) continue;
    const auto pos = kBase64Alphabet.find(ch);
    if (pos == std::string_view::npos) {
      throw Error(ErrorCode::kIoError, "invalid base64 character");
    }
    buffer = (buffer << 6) | static_cast<std::uint32_t>(pos);
    bits += 6;
    if (bits >= 8) {
      bits -= 8;
      out += static_cast<char>((buffer >> bits) & 0xFF);
    }
  }
  return out;
}

}  // namespace cle
