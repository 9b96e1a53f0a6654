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

#include "cle/corpus.hpp"

#include <algorithm>
#include <array>
#include <random>
#include <set>

#include "cle/error.hpp"

namespace cle {

namespace {

constexpr std::array<const char*, 15> kPositive = {
    "great",     "excellent", "wonderful", "superb",   "enjoyable",
    "delightful", "brilliant", "charming",  "engaging", "moving",
    "fantastic", "beautiful", "perfect",   "gripping", "masterful"};
constexpr std::array<const char*, 15> kNegative = {
    "awful", "boring",   "poor",     "dull",      "tedious",
    "terrible", "weak",  "disappointing", "bland", "clumsy",
    "dreadful", "mediocre", "pointless", "tiresome", "annoying"};

std::vector<std::string> filler_words(int count, Rng& rng) {
  static constexpr std::array<const char*, 14> kOnsets = {"b", "d", "f", "g", "k", "l", "m",
                                                          "n", "p", "r", "s", "t", "v", "z"};
  static constexpr std::array<const char*, 5> kVowels = {"a", "e", "i", "o", "u"};
  std::set<std::string> reserved(kPositive.begin(), kPositive.end());
  reserved.insert(kNegative.begin(), kNegative.end());
  for (const char* w : {"not", "good", "bad"}) reserved.insert(w);
  std::uniform_int_distribution<int> onset(0, kOnsets.size() - 1), vowel(0, kVowels.size() - 1),
      syllables(2, 3);
  std::set<std::string> seen;
  std::vector<std::string> words;
  while (static_cast<int>(words.size()) < count) {
    std::string w;
    for (int s = syllables(rng); s > 0; --s) {
      w += kOnsets[onset(rng)];
      w += kVowels[vowel(rng)];
    }
    if (reserved.count(w) == 0 && seen.insert(w).second) words.push_back(std::move(w));
  }
  return words;
}

}  // namespace

SparseDataset generate_polarity_corpus(const CorpusOptions& options) {
  if (options.n_docs < 2 || options.n_train > options.n_docs || options.min_length < 1 ||
      options.max_length < options.min_length || options.filler_vocabulary < 1) {
    throw Error(ErrorCode::kConfigError, "invalid corpus options");
  }
  Rng rng(options.seed);
  const std::vector<std::string> fillers = filler_words(options.filler_vocabulary, rng);
  std::vector<double> zipf(fillers.size());
  for (std::size_t r = 0; r < zipf.size(); ++r) zipf[r] = 1.0 / static_cast<double>(r + 1);
  std::discrete_distribution<std::size_t> filler(zipf.begin(), zipf.end());
  std::uniform_int_distribution<int> length(options.min_length, options.max_length);
  std::uniform_int_distribution<std::size_t> lexicon(0, kPositive.size() - 1);
  std::uniform_real_distribution<double> unit(0.0, 1.0);

  SparseDataset dataset;
  dataset.modality = Modality::kText;
  dataset.classes = {"negative", "positive"};
  for (int i = 0; i < options.n_docs; ++i) {
    const int label = i % 2;
    const int n = length(rng);
    std::string doc;
    for (int t = 0; t < n; ++t) {
      if (!doc.empty()) doc += ' ';
      const double u = unit(rng);
      if (u < options.negation_rate) {
        doc += label == 1 ? "not bad" : "not good";
      } else if (u < options.negation_rate + options.sentiment_rate) {
        const bool own = unit(rng) < options.own_class_share;
        const bool positive = (label == 1) == own;
        doc += positive ? kPositive[lexicon(rng)] : kNegative[lexicon(rng)];
      } else {
        doc += fillers[filler(rng)];
      }
      if ((t + 1) % options.sentence_length == 0 || t + 1 == n) doc += " .";
    }
    dataset.instances.emplace_back(std::move(doc));
    dataset.labels.push_back(label);
    dataset.splits.push_back(i < options.n_train ? Split::kTrain : Split::kTest);
  }
  return dataset;
}

}  // namespace cle
