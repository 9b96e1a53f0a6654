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

#ifndef CLE_REPR_HPP_
#define CLE_REPR_HPP_

#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "cle/image.hpp"
#include "cle/instance.hpp"
#include "cle/tabular.hpp"

namespace cle {

// ---------------------------------------------------------------------------
// Tokenization
// ---------------------------------------------------------------------------

struct Token {
  std::string text;  // ASCII case-folded
  std::size_t begin = 0;
  std::size_t length = 0;
};

// Splits on whitespace; every ASCII punctuation character is a token of its
// own; runs of alphanumerics (and any non-ASCII byte) form word tokens.
std::vector<Token> tokenize(std::string_view text);

// ---------------------------------------------------------------------------
// Binary representation
// ---------------------------------------------------------------------------

enum class UnitKind { kWord, kTabularBin, kImageSegment };

struct TokenSpan {
  std::size_t begin = 0;
  std::size_t length = 0;
};

struct WordPayload {
  std::vector<TokenSpan> spans;  // every occurrence in the source text
};
struct BinPayload {
  int column = 0;
  int bin = 0;
};
struct SegmentPayload {
  int segment = 0;
};

struct FeatureUnit {
  int index = 0;
  UnitKind kind = UnitKind::kWord;
  std::string label;
  // Identifier shared with model featurizers: the token for words, the column
  // name for tabular bins, "segment:<id>" for image segments.
  std::string key;
  std::variant<WordPayload, BinPayload, SegmentPayload> payload;
};

struct BinaryRepr {
  Bits bits;
  std::vector<FeatureUnit> units;
  std::string instance_ref;
  std::vector<std::string> warnings;

  int dim() const { return static_cast<int>(bits.size()); }
};

BinaryRepr build_text_repr(std::string_view text, std::string instance_ref = {});
BinaryRepr build_tabular_repr(const TabularRow& row, const TabularSchema& schema,
                              std::string instance_ref = {});
BinaryRepr build_image_repr(const Image& image, const SegmentMap& segments,
                            std::string instance_ref = {});

// ---------------------------------------------------------------------------
// Combinations
// ---------------------------------------------------------------------------

using Combination = std::vector<int>;

struct CombinationSpec {
  std::vector<int> spans;  // combination sizes, each in [2, focus.size()]
  std::vector<int> focus;  // feature indices eligible for combinations

  // Throws SpecInvalid. Pass d < 0 to skip the index bound check.
  void validate(int d = -1) const;
  // Sum over spans of choose(|focus|, b).
  std::size_t extension_length() const;
};

std::uint64_t choose(int n, int k);

// Spans in order; within a span, tuples of focus entries in lexicographic
// order of their positions in the focus list.
std::vector<Combination> enumerate_combinations(const CombinationSpec& spec);

// ext[n] = AND of base[j] over combos[n].
Bits extension_bits(std::span<const std::uint8_t> base,
                    std::span<const Combination> combos);

struct ExtendedRepr {
  BinaryRepr base;
  Bits ext_bits;
  std::vector<Combination> combos;

  // Base bits followed by extension bits (width d + l).
  Bits concatenated() const;
};

ExtendedRepr extend_with_combinations(const BinaryRepr& repr,
                                      const CombinationSpec& spec);

// ---------------------------------------------------------------------------
// Reconstruction
// ---------------------------------------------------------------------------

// Drops every occurrence of switched-off tokens. Separators follow the kept
// tokens they precede, so the all-ones vector reproduces the source exactly.
std::string reconstruct_text(std::string_view original, const BinaryRepr& repr,
                             std::span<const std::uint8_t> bits);

// Switched-off columns receive a training value drawn uniformly from a
// different bin. Throws MissingContext when no such value exists.
TabularRow reconstruct_tabular(const TabularRow& original, const BinaryRepr& repr,
                               std::span<const std::uint8_t> bits,
                               const TabularContext& context, Rng& rng);

// Switched-off segments are filled with their mean color.
Image reconstruct_image(const Image& original, const SegmentMap& segments,
                        std::span<const std::uint8_t> bits);

// An instance paired with its interpretable representation and everything
// needed to map a presence vector back into the black box's input space.
// Immutable; copies share state.
class InterpretableInstance {
 public:
  static InterpretableInstance from_text(std::string text, std::string ref = {});
  static InterpretableInstance from_tabular(TabularRow row,
                                            std::shared_ptr<const TabularContext> context,
                                            std::string ref = {});
  static InterpretableInstance from_image(Image image, SegmentMap segments,
                                          std::string ref = {});

  const BinaryRepr& repr() const { return state_->repr; }
  const Instance& original() const { return state_->original; }
  Modality modality() const { return modality_of(state_->original); }
  int dim() const { return state_->repr.dim(); }
  const std::string& ref() const { return state_->repr.instance_ref; }
  // Empty unless the instance is an image.
  const SegmentMap& segments() const { return state_->segments; }

  // `seed` feeds the tabular replacement draw; other modalities ignore it.
  Instance reconstruct(std::span<const std::uint8_t> bits, std::uint64_t seed) const;

 private:
  struct State {
    Instance original;
    BinaryRepr repr;
    std::shared_ptr<const TabularContext> tabular;
    SegmentMap segments;
    std::vector<std::array<std::uint8_t, 3>> segment_means;
  };
  explicit InterpretableInstance(std::shared_ptr<const State> state)
      : state_(std::move(state)) {}

  std::shared_ptr<const State> state_;
};

}  // namespace cle

#endif  // CLE_REPR_HPP_
