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

// Writes the synthetic polarity corpus as label<TAB>document lines.
//
//   make_corpus OUT.tsv [SEED]

#include <cstdlib>
#include <iostream>

#include "cle/corpus.hpp"

int main(int argc, char** argv) {
  if (argc < 2) {
    std::cerr << "usage: make_corpus OUT.tsv [SEED]\n";
    return 2;
  }
  cle::CorpusOptions options;
  if (argc > 2) options.seed = std::strtoull(argv[2], nullptr, 10);
  cle::write_text_tsv(argv[1], cle::generate_polarity_corpus(options));
  return 0;
}
