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

#include <algorithm>
#include <cmath>
#include <random>
#include <set>

#include "cle/error.hpp"
#include "cle/image.hpp"
#include "cle/repr.hpp"
#include "cle/tabular.hpp"

namespace cle {
namespace {

BinaryRepr raw_repr(Bits bits) {
  BinaryRepr r;
  r.bits = std::move(bits);
  for (int i = 0; i < r.dim(); ++i) {
    FeatureUnit u;
    u.index = i;
    u.label = "f" + std::to_string(i);
    u.key = u.label;
    r.units.push_back(u);
  }
  return r;
}

// Factorial-based binomial, independent of choose().
double binomial(int n, int k) {
  if (k > n) return 0;
  return std::round(std::tgamma(n + 1.0) / (std::tgamma(k + 1.0) * std::tgamma(n - k + 1.0)));
}

TEST(TextRepr, TwoDistinctTokens) {
  const BinaryRepr r = build_text_repr("not bad");
  ASSERT_EQ(r.dim(), 2);
  EXPECT_EQ(r.units[0].label, "not");
  EXPECT_EQ(r.units[1].label, "bad");
  EXPECT_EQ(r.bits, (Bits{1, 1}));
}

TEST(TextRepr, DuplicatesCollapse) {
  const BinaryRepr r = build_text_repr("the the the");
  ASSERT_EQ(r.dim(), 1);
  EXPECT_EQ(std::get<WordPayload>(r.units[0].payload).spans.size(), 3u);
}

TEST(TextRepr, CaseFoldedPunctuation) {
  // this, is, not, a, good, book, "." by hand.
  EXPECT_EQ(build_text_repr("This is not a good book .").dim(), 7);
  EXPECT_EQ(build_text_repr("Good good GOOD!").dim(), 2);
}

TEST(TextRepr, EmptyThrows) {
  try {
    build_text_repr("   ");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kEmptyInstance);
  }
}

TEST(TextRepr, ReconstructRemovesEveryOccurrence) {
  const std::string text = "not bad";
  const BinaryRepr r = build_text_repr(text);
  EXPECT_EQ(reconstruct_text(text, r, Bits{1, 0}), "not");
  const std::string longer = "The film, the cast. The end!";
  const BinaryRepr lr = build_text_repr(longer);
  EXPECT_EQ(reconstruct_text(longer, lr, Bits(lr.dim(), 1)), longer);
  Bits drop_the(lr.dim(), 1);
  drop_the[0] = 0;
  const std::string out = reconstruct_text(longer, lr, drop_the);
  EXPECT_EQ(build_text_repr(out).dim(), lr.dim() - 1);
  EXPECT_EQ(out.find("the"), std::string::npos);
  EXPECT_EQ(out.find("The"), std::string::npos);
}

TEST(Quantiles, UniformOneToHundred) {
  std::vector<double> sample;
  for (int i = 1; i <= 100; ++i) sample.push_back(i);
  // Position (n-1)q on the sorted sample, interpolated by hand.
  const std::vector<double> edges = quartile_edges(sample);
  ASSERT_EQ(edges.size(), 3u);
  EXPECT_DOUBLE_EQ(edges[0], 25.75);
  EXPECT_DOUBLE_EQ(edges[1], 50.5);
  EXPECT_DOUBLE_EQ(edges[2], 75.25);
}

TEST(TabularRepr, EdgeValueGoesUp) {
  ColumnSpec c;
  c.name = "age";
  c.edges = {10, 20, 30};
  EXPECT_EQ(assign_bin(c, 20.0).bin, 2);
  EXPECT_EQ(assign_bin(c, 19.999).bin, 1);
  EXPECT_EQ(assign_bin(c, 10.0).bin, 1);
}

TEST(TabularRepr, FiveColumnsAllOnes) {
  TabularSchema schema;
  for (int i = 0; i < 5; ++i) {
    ColumnSpec c;
    c.name = "c" + std::to_string(i);
    c.edges = {0.5};
    schema.columns.push_back(c);
  }
  TabularRow row;
  for (int i = 0; i < 5; ++i) row.values.emplace_back(double(i));
  const BinaryRepr r = build_tabular_repr(row, schema);
  EXPECT_EQ(r.bits, Bits(5, 1));
  row.values.pop_back();
  EXPECT_THROW(build_tabular_repr(row, schema), Error);
}

TEST(TabularRepr, ReconstructDrawsFromAnotherBin) {
  TabularSchema schema;
  ColumnSpec c;
  c.name = "x";
  c.edges = {10};
  schema.columns.push_back(c);
  std::vector<TabularRow> train;
  for (double v : {1.0, 2.0, 3.0, 11.0, 12.0}) train.push_back(TabularRow{{v}});
  const TabularContext context(schema, train);
  const TabularRow original{{2.5}};
  const BinaryRepr r = build_tabular_repr(original, schema);
  Rng rng(3);
  for (int i = 0; i < 50; ++i) {
    const TabularRow out = reconstruct_tabular(original, r, Bits{0}, context, rng);
    EXPECT_GE(std::get<double>(out.values[0]), 10.0);
  }
  EXPECT_EQ(reconstruct_tabular(original, r, Bits{1}, context, rng), original);
}

TEST(ImageRepr, GridExactAndRemainder) {
  const SegmentMap even = grid_segments(100, 100, 4, 4);
  EXPECT_EQ(even.segment_count, 16);
  EXPECT_EQ(std::count(even.ids.begin(), even.ids.end(), 0), 25 * 25);
  const SegmentMap odd = grid_segments(10, 10, 3, 3);
  EXPECT_EQ(odd.segment_count, 9);
  EXPECT_EQ(odd.at(9, 0), 2);
  EXPECT_EQ(std::count(odd.ids.begin(), odd.ids.end(), 8), 16);  // 4x4 corner
}

TEST(ImageRepr, MeanFillRoundsHalfUp) {
  Image img(2, 1);
  img.at(0, 0, 0) = 1;
  img.at(1, 0, 0) = 2;  // mean 1.5 -> 2
  img.at(0, 0, 1) = 10;
  img.at(1, 0, 1) = 20;
  const SegmentMap seg = grid_segments(2, 1, 1, 1);
  const BinaryRepr r = build_image_repr(img, seg);
  EXPECT_EQ(r.dim(), 1);
  const Image off = reconstruct_image(img, seg, Bits{0});
  for (int x = 0; x < 2; ++x) {
    EXPECT_EQ(off.at(x, 0, 0), 2);
    EXPECT_EQ(off.at(x, 0, 1), 15);
    EXPECT_EQ(off.at(x, 0, 2), 0);
  }
  EXPECT_EQ(reconstruct_image(img, seg, Bits{1}), img);
}

TEST(ImageRepr, SuppliedSegmentMapPassesThrough) {
  std::vector<int> ids(40);
  for (int i = 0; i < 40; ++i) ids[i] = i;
  const SegmentMap seg = make_segment_map(40, 1, ids);
  EXPECT_EQ(build_image_repr(Image(40, 1), seg).dim(), 40);
  EXPECT_THROW(build_image_repr(Image(41, 1), seg), Error);
}

TEST(Combinations, Enumeration) {
  const std::vector<Combination> three = enumerate_combinations({{2}, {0, 1, 2}});
  EXPECT_EQ(three, (std::vector<Combination>{{0, 1}, {0, 2}, {1, 2}}));
  CombinationSpec ten{{2}, {}};
  for (int i = 0; i < 10; ++i) ten.focus.push_back(i);
  EXPECT_EQ(ten.extension_length(), 45u);
  EXPECT_EQ((CombinationSpec{{2, 3}, {0, 1, 2, 3}}).extension_length(), 10u);
}

TEST(Combinations, InvalidSpecs) {
  EXPECT_THROW((CombinationSpec{{1}, {0, 1}}).validate(), Error);
  EXPECT_THROW((CombinationSpec{{3}, {0, 1}}).validate(), Error);
  EXPECT_THROW((CombinationSpec{{2}, {0, 0}}).validate(), Error);
  EXPECT_THROW((CombinationSpec{{2}, {0, 5}}).validate(3), Error);
}

TEST(Combinations, LengthMatchesFactorialFormula) {
  for (int lambda = 2; lambda <= 12; ++lambda) {
    for (int b = 2; b <= std::min(4, lambda); ++b) {
      CombinationSpec spec{{b}, {}};
      for (int i = 0; i < lambda; ++i) spec.focus.push_back(i);
      EXPECT_EQ(enumerate_combinations(spec).size(), static_cast<std::size_t>(binomial(lambda, b)));
      EXPECT_EQ(choose(lambda, b), static_cast<std::uint64_t>(binomial(lambda, b)));
    }
  }
}

TEST(Extension, HandExamples) {
  EXPECT_EQ(extend_with_combinations(raw_repr({1, 1}), {{2}, {0, 1}}).ext_bits, (Bits{1}));
  const ExtendedRepr e = extend_with_combinations(raw_repr({1, 0, 1}), {{2}, {0, 1, 2}});
  EXPECT_EQ(e.ext_bits, (Bits{0, 1, 0}));
  EXPECT_EQ(e.concatenated(), (Bits{1, 0, 1, 0, 1, 0}));
}

TEST(Extension, PropertiesOnRandomVectors) {
  Rng rng(11);
  for (int trial = 0; trial < 300; ++trial) {
    const int d = 2 + static_cast<int>(rng() % 11);
    std::vector<int> all(d);
    for (int i = 0; i < d; ++i) all[i] = i;
    std::shuffle(all.begin(), all.end(), rng);
    const int lambda = 2 + static_cast<int>(rng() % (d - 1));
    CombinationSpec spec{{2}, std::vector<int>(all.begin(), all.begin() + lambda)};
    if (lambda >= 3) spec.spans.push_back(3);

    Bits ones(d, 1);
    const Bits ext_ones = extend_with_combinations(raw_repr(ones), spec).ext_bits;
    EXPECT_TRUE(std::all_of(ext_ones.begin(), ext_ones.end(), [](auto b) { return b == 1; }));

    Bits bits(d);
    for (auto& b : bits) b = rng() % 2;
    const ExtendedRepr e = extend_with_combinations(raw_repr(bits), spec);
    for (std::size_t n = 0; n < e.combos.size(); ++n) {
      for (int j : e.combos[n]) {
        if (bits[j] == 0) EXPECT_EQ(e.ext_bits[n], 0);
      }
    }
    // Monotone: switching a bit on never switches an extension bit off.
    const int flip = static_cast<int>(rng() % d);
    if (bits[flip] == 0) {
      Bits up = bits;
      up[flip] = 1;
      const Bits after = extend_with_combinations(raw_repr(up), spec).ext_bits;
      for (std::size_t n = 0; n < after.size(); ++n) EXPECT_GE(after[n], e.ext_bits[n]);
    }
  }
}

TEST(SegmentIo, PgmRoundTrip) {
  const std::string pgm = "P2\n3 1\n2\n0 1 2\n";
  const SegmentMap seg = decode_pgm_segments(pgm);
  EXPECT_EQ(seg.segment_count, 3);
  EXPECT_EQ(seg.at(2, 0), 2);
}

TEST(ImageIo, PpmRoundTrip) {
  Image img(3, 2);
  for (std::size_t i = 0; i < img.rgb.size(); ++i) img.rgb[i] = static_cast<std::uint8_t>(i * 7);
  EXPECT_EQ(decode_ppm(encode_ppm(img)), img);
  EXPECT_EQ(base64_decode(base64_encode("hello world")), "hello world");
}

}  // namespace
}  // namespace cle
