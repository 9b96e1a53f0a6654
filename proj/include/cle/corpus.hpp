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

#ifndef CLE_CORPUS_HPP_
#define CLE_CORPUS_HPP_

#include <cstdint>

#include "cle/models.hpp"

namespace cle {

// Synthetic two-class review corpus. Each document mixes Zipf-distributed
// filler words with sentiment words drawn mostly from its own class and
// occasional negated phrases ("not good" in negative reviews).
struct CorpusOptions {
  int n_docs = 2000;
  int n_train = 1600;
  int filler_vocabulary = 1500;
  int min_length = 130;
  int max_length = 190;
  double sentiment_rate = 0.02;
  double own_class_share = 0.75;
  double negation_rate = 0.002;
  int sentence_length = 14;
  std::uint64_t seed = 20180713;
};

// Labels alternate negative/positive; the first n_train documents are tagged
// kTrain and the rest kTest.
SparseDataset generate_polarity_corpus(const CorpusOptions& options = {});

}  // namespace cle

#endif  // CLE_CORPUS_HPP_
