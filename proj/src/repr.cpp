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

#include "cle/repr.hpp"

#include <algorithm>
#include <cctype>
#include <numeric>
#include <unordered_map>

#include "cle/error.hpp"

namespace cle {

std::vector<Token> tokenize(std::string_view text) {
  std::vector<Token> tokens;
  std::size_t i = 0;
  const auto is_word_byte = [](unsigned char ch) {
    return ch >= 0x80 || std::isalnum(ch);
  };
  while (i < text.size()) {
    const auto ch = static_cast<unsigned char>(text[i]);
    if (std::isspace(ch) || std::iscntrl(ch)) {
      ++i;
    } else if (is_word_byte(ch)) {
      const std::size_t begin = i;
      std::string folded;
      while (i < text.size() && is_word_byte(static_cast<unsigned char>(text[i]))) {
        folded += static_cast<char>(std::tolower(static_cast<unsigned char>(text[i])));
        ++i;
      }
      tokens.push_back({std::move(folded), begin, i - begin});
    } else {
      tokens.push_back({std::string(1, static_cast<char>(ch)), i, 1});
      ++i;
    }
  }
  return tokens;
}

BinaryRepr build_text_repr(std::string_view text, std::string instance_ref) {
  const std::vector<Token> tokens = tokenize(text);
  if (tokens.empty()) {
    throw Error(ErrorCode::kEmptyInstance, "text has no tokens");
  }
  BinaryRepr repr;
  repr.instance_ref = std::move(instance_ref);
  std::unordered_map<std::string, int> index_of;
  for (const Token& token : tokens) {
    auto [it, inserted] = index_of.try_emplace(token.text, static_cast<int>(repr.units.size()));
    if (inserted) {
      FeatureUnit unit;
      unit.index = it->second;
      unit.kind = UnitKind::kWord;
      unit.label = token.text;
      unit.key = token.text;
      unit.payload = WordPayload{};
      repr.units.push_back(std::move(unit));
    }
    std::get<WordPayload>(repr.units[it->second].payload)
        .spans.push_back({token.begin, token.length});
  }
  repr.bits.assign(repr.units.size(), 1);
  return repr;
}

BinaryRepr build_tabular_repr(const TabularRow& row, const TabularSchema& schema,
                              std::string instance_ref) {
  if (row.values.size() != schema.columns.size()) {
    throw Error(ErrorCode::kSchemaMismatch,
                "row has " + std::to_string(row.values.size()) + " values, schema has " +
                    std::to_string(schema.columns.size()) + " columns");
  }
  if (schema.columns.empty()) throw Error(ErrorCode::kEmptyInstance, "schema has no columns");
  BinaryRepr repr;
  repr.instance_ref = std::move(instance_ref);
  for (std::size_t c = 0; c < schema.columns.size(); ++c) {
    const ColumnSpec& column = schema.columns[c];
    const BinAssignment assignment = assign_bin(column, row.values[c]);
    if (assignment.out_of_range) {
      repr.warnings.push_back("OutOfRange: column " + column.name + " value " +
                              format_value(row.values[c]) +
                              " outside training range; assigned to bin " +
                              std::to_string(assignment.bin));
    }
    FeatureUnit unit;
    unit.index = static_cast<int>(c);
    unit.kind = UnitKind::kTabularBin;
    unit.label = column.bin_label(assignment.bin);
    unit.key = column.name;
    unit.payload = BinPayload{static_cast<int>(c), assignment.bin};
    repr.units.push_back(std::move(unit));
  }
  repr.bits.assign(repr.units.size(), 1);
  return repr;
}

BinaryRepr build_image_repr(const Image& image, const SegmentMap& segments,
                            std::string instance_ref) {
  if (image.width != segments.width || image.height != segments.height) {
    throw Error(ErrorCode::kDimensionMismatch,
                "segment map " + std::to_string(segments.width) + "x" +
                    std::to_string(segments.height) + " vs image " +
                    std::to_string(image.width) + "x" + std::to_string(image.height));
  }
  segments.validate();
  BinaryRepr repr;
  repr.instance_ref = std::move(instance_ref);
  for (int s = 0; s < segments.segment_count; ++s) {
    FeatureUnit unit;
    unit.index = s;
    unit.kind = UnitKind::kImageSegment;
    unit.label = "segment " + std::to_string(s);
    unit.key = "segment:" + std::to_string(s);
    unit.payload = SegmentPayload{s};
    repr.units.push_back(std::move(unit));
  }
  repr.bits.assign(repr.units.size(), 1);
  return repr;
}

std::uint64_t choose(int n, int k) {
  if (k < 0 || k > n) return 0;
  k = std::min(k, n - k);
  std::uint64_t result = 1;
  for (int i = 1; i <= k; ++i) {
    result = result * static_cast<std::uint64_t>(n - k + i) / static_cast<std::uint64_t>(i);
  }
  return result;
}

void CombinationSpec::validate(int d) const {
  const int lambda = static_cast<int>(focus.size());
  for (std::size_t i = 0; i < spans.size(); ++i) {
    const int b = spans[i];
    if (b < 2 || b > lambda) {
      throw Error(ErrorCode::kSpecInvalid,
                  "span " + std::to_string(b) + " outside [2, " + std::to_string(lambda) + "]");
    }
    if (std::find(spans.begin(), spans.begin() + static_cast<long>(i), b) !=
        spans.begin() + static_cast<long>(i)) {
      throw Error(ErrorCode::kSpecInvalid, "duplicate span " + std::to_string(b));
    }
  }
  for (std::size_t i = 0; i < focus.size(); ++i) {
    const int j = focus[i];
    if (j < 0 || (d >= 0 && j >= d)) {
      throw Error(ErrorCode::kSpecInvalid, "focus index " + std::to_string(j) + " out of range");
    }
    if (std::find(focus.begin(), focus.begin() + static_cast<long>(i), j) !=
        focus.begin() + static_cast<long>(i)) {
      throw Error(ErrorCode::kSpecInvalid, "duplicate focus index " + std::to_string(j));
    }
  }
}

std::size_t CombinationSpec::extension_length() const {
  std::size_t total = 0;
  for (int b : spans) total += choose(static_cast<int>(focus.size()), b);
  return total;
}

std::vector<Combination> enumerate_combinations(const CombinationSpec& spec) {
  spec.validate();
  const int lambda = static_cast<int>(spec.focus.size());
  std::vector<Combination> combos;
  combos.reserve(spec.extension_length());
  for (int b : spec.spans) {
    // Odometer over increasing position tuples.
    std::vector<int> pos(b);
    std::iota(pos.begin(), pos.end(), 0);
    while (true) {
      Combination combo(b);
      for (int i = 0; i < b; ++i) combo[i] = spec.focus[pos[i]];
      combos.push_back(std::move(combo));
      int i = b - 1;
      while (i >= 0 && pos[i] == lambda - b + i) --i;
      if (i < 0) break;
      ++pos[i];
      for (int k = i + 1; k < b; ++k) pos[k] = pos[k - 1] + 1;
    }
  }
  return combos;
}

Bits extension_bits(std::span<const std::uint8_t> base, std::span<const Combination> combos) {
  Bits ext(combos.size(), 1);
  for (std::size_t n = 0; n < combos.size(); ++n) {
    for (int item : combos[n]) {
      if (base[item] == 0) {
        ext[n] = 0;
        break;
      }
    }
  }
  return ext;
}

Bits ExtendedRepr::concatenated() const {
  Bits all = base.bits;
  all.insert(all.end(), ext_bits.begin(), ext_bits.end());
  return all;
}

ExtendedRepr extend_with_combinations(const BinaryRepr& repr, const CombinationSpec& spec) {
  spec.validate(repr.dim());
  ExtendedRepr out;
  out.base = repr;
  out.combos = enumerate_combinations(spec);
  out.ext_bits = extension_bits(repr.bits, out.combos);
  return out;
}

std::string reconstruct_text(std::string_view original, const BinaryRepr& repr,
                             std::span<const std::uint8_t> bits) {
  if (bits.size() != repr.units.size()) {
    throw Error(ErrorCode::kLengthMismatch, "bit vector does not match representation");
  }
  struct Occurrence {
    TokenSpan span;
    int unit;
  };
  std::vector<Occurrence> occurrences;
  for (const FeatureUnit& unit : repr.units) {
    for (const TokenSpan& span : std::get<WordPayload>(unit.payload).spans) {
      occurrences.push_back({span, unit.index});
    }
  }
  std::sort(occurrences.begin(), occurrences.end(),
            [](const Occurrence& a, const Occurrence& b) { return a.span.begin < b.span.begin; });
  if (occurrences.empty()) return std::string(original);

  std::string out;
  out.reserve(original.size());
  const std::string_view leading = original.substr(0, occurrences.front().span.begin);
  bool first_kept = true;
  std::size_t prev_end = 0;
  for (const Occurrence& occ : occurrences) {
    const std::string_view gap = original.substr(prev_end, occ.span.begin - prev_end);
    prev_end = occ.span.begin + occ.span.length;
    if (bits[occ.unit] == 0) continue;
    out += first_kept ? leading : gap;
    first_kept = false;
    out += original.substr(occ.span.begin, occ.span.length);
  }
  if (first_kept) out += leading;
  out += original.substr(prev_end);
  return out;
}

TabularRow reconstruct_tabular(const TabularRow& original, const BinaryRepr& repr,
                               std::span<const std::uint8_t> bits,
                               const TabularContext& context, Rng& rng) {
  if (bits.size() != repr.units.size()) {
    throw Error(ErrorCode::kLengthMismatch, "bit vector does not match representation");
  }
  TabularRow row = original;
  for (const FeatureUnit& unit : repr.units) {
    if (bits[unit.index] != 0) continue;
    const auto& payload = std::get<BinPayload>(unit.payload);
    const auto& bins = context.values_by_bin.at(payload.column);
    std::size_t total = 0;
    for (std::size_t b = 0; b < bins.size(); ++b) {
      if (static_cast<int>(b) != payload.bin) total += bins[b].size();
    }
    if (total == 0) {
      throw Error(ErrorCode::kMissingContext,
                  "no training value outside the current bin for column " + unit.key);
    }
    std::uniform_int_distribution<std::size_t> pick(0, total - 1);
    std::size_t k = pick(rng);
    for (std::size_t b = 0; b < bins.size(); ++b) {
      if (static_cast<int>(b) == payload.bin) continue;
      if (k < bins[b].size()) {
        row.values[payload.column] = bins[b][k];
        break;
      }
      k -= bins[b].size();
    }
  }
  return row;
}

Image reconstruct_image(const Image& original, const SegmentMap& segments,
                        std::span<const std::uint8_t> bits) {
  if (bits.size() != static_cast<std::size_t>(segments.segment_count)) {
    throw Error(ErrorCode::kLengthMismatch, "bit vector does not match segment count");
  }
  const auto means = segment_mean_colors(original, segments);
  Image out = original;
  for (int y = 0; y < out.height; ++y) {
    for (int x = 0; x < out.width; ++x) {
      const int s = segments.at(x, y);
      if (bits[s] != 0) continue;
      for (int c = 0; c < 3; ++c) out.at(x, y, c) = means[s][c];
    }
  }
  return out;
}

InterpretableInstance InterpretableInstance::from_text(std::string text, std::string ref) {
  auto state = std::make_shared<State>();
  state->repr = build_text_repr(text, std::move(ref));
  state->original = std::move(text);
  return InterpretableInstance(std::move(state));
}

InterpretableInstance InterpretableInstance::from_tabular(
    TabularRow row, std::shared_ptr<const TabularContext> context, std::string ref) {
  if (!context) throw Error(ErrorCode::kMissingContext, "tabular instance needs training context");
  auto state = std::make_shared<State>();
  state->repr = build_tabular_repr(row, context->schema, std::move(ref));
  state->original = std::move(row);
  state->tabular = std::move(context);
  return InterpretableInstance(std::move(state));
}

InterpretableInstance InterpretableInstance::from_image(Image image, SegmentMap segments,
                                                        std::string ref) {
  auto state = std::make_shared<State>();
  state->repr = build_image_repr(image, segments, std::move(ref));
  state->segment_means = segment_mean_colors(image, segments);
  state->segments = std::move(segments);
  state->original = std::move(image);
  return InterpretableInstance(std::move(state));
}

Instance InterpretableInstance::reconstruct(std::span<const std::uint8_t> bits,
                                            std::uint64_t seed) const {
  const State& s = *state_;
  if (bits.size() != s.repr.bits.size()) {
    throw Error(ErrorCode::kLengthMismatch, "bit vector does not match representation");
  }
  switch (modality()) {
    case Modality::kText:
      return reconstruct_text(std::get<std::string>(s.original), s.repr, bits);
    case Modality::kTabular: {
      Rng rng(seed);
      return reconstruct_tabular(std::get<TabularRow>(s.original), s.repr, bits, *s.tabular, rng);
    }
    case Modality::kImage: {
      Image out = std::get<Image>(s.original);
      for (int y = 0; y < out.height; ++y) {
        for (int x = 0; x < out.width; ++x) {
          const int seg = s.segments.at(x, y);
          if (bits[seg] != 0) continue;
          for (int c = 0; c < 3; ++c) out.at(x, y, c) = s.segment_means[seg][c];
        }
      }
      return out;
    }
  }
  return s.original;
}

}  // namespace cle
