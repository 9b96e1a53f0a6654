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

#include <cmath>
#include <limits>

#include "cle/corpus.hpp"
#include "cle/error.hpp"
#include "cle/eval.hpp"
#include "oracles.hpp"

namespace cle {
namespace {

TEST(Summary, MeanAndStandardError) {
  const MeanSe s = summarize({1, 2, 3, std::numeric_limits<double>::quiet_NaN(), 6});
  EXPECT_EQ(s.count, 4);
  EXPECT_DOUBLE_EQ(s.mean, 3.0);
  // Sample sd of {1,2,3,6} = sqrt(14/3).
  EXPECT_NEAR(s.se, std::sqrt(14.0 / 3.0) / 2.0, 1e-12);
}

TEST(Trust, F1ByHand) {
  // tp=2, fp=1, fn=1 -> 4/6.
  EXPECT_NEAR(trust_f1({true, true, true, false, false}, {true, true, false, true, false}), 2.0 / 3.0, 1e-12);
  EXPECT_EQ(trust_f1({false, false}, {false, false}), 1.0);
}

TEST(Recall, PresentGoldOnly) {
  const auto inst = InterpretableInstance::from_text("good plot bad acting");
  Explanation e;
  e.terms.push_back(Term{Term::Kind::kSingle, {0}, "good", 0.1, std::nullopt});
  e.terms.push_back(Term{Term::Kind::kCombo, {2, 3}, "bad AND acting", 0.1, std::nullopt});
  // Gold {good, bad, awful}; awful absent, so 2 of 2 present are found.
  EXPECT_DOUBLE_EQ(gold_recall(e, inst.repr(), {"good", "bad", "awful"}), 1.0);
  EXPECT_DOUBLE_EQ(gold_recall(e, inst.repr(), {"plot", "good"}), 0.5);
  EXPECT_TRUE(std::isnan(gold_recall(e, inst.repr(), {"awful"})));
}

TEST(Flagged, GreedyZeroDropsSkipped) {
  Explanation e;
  e.method = Method::kGreedy;
  e.terms.push_back(Term{Term::Kind::kSingle, {1}, "a", 0.2, 1});
  e.terms.push_back(Term{Term::Kind::kSingle, {4}, "b", 0.0, 2});
  EXPECT_EQ(flagged_features(e), (std::vector<int>{1}));
  EXPECT_EQ(explained_features(e).size(), 2u);
}

TEST(Noise, InjectionRates) {
  CorpusOptions co;
  co.n_docs = 20000;
  co.n_train = 20000;
  co.min_length = 3;
  co.max_length = 5;
  SparseDataset base = generate_polarity_corpus(co);
  assign_splits(base, 10000, 0);
  NoiseOptions no;
  no.seed = 3;
  const NoisyDataset noisy = inject_noise(base, no);
  ASSERT_EQ(noisy.keys.size(), 10u);
  for (std::size_t f = 0; f < noisy.keys.size(); ++f) {
    double count[2][2] = {{0, 0}, {0, 0}}, hits[2][2] = {{0, 0}, {0, 0}};
    for (std::size_t i = 0; i < noisy.dataset.size(); ++i) {
      const int test = noisy.dataset.splits[i] == Split::kTest;
      const int y = noisy.dataset.labels[i];
      count[test][y] += 1;
      const auto& doc = std::get<std::string>(noisy.dataset.instances[i]);
      bool has = false;
      for (const Token& t : tokenize(doc)) has |= t.text == noisy.keys[f];
      hits[test][y] += has;
    }
    const int high = noisy.high_class[f];
    EXPECT_NEAR(hits[0][high] / count[0][high], 0.20, 0.02);
    EXPECT_NEAR(hits[0][1 - high] / count[0][1 - high], 0.10, 0.02);
    EXPECT_NEAR(hits[1][0] / count[1][0], 0.10, 0.02);
    EXPECT_NEAR(hits[1][1] / count[1][1], 0.10, 0.02);
  }
  EXPECT_EQ(std::get<std::string>(inject_noise(base, no).dataset.instances[5]),
            std::get<std::string>(noisy.dataset.instances[5]));
}

TEST(Faithfulness, ShapeOnSmallCorpus) {
  CorpusOptions co;
  co.n_docs = 300;
  co.n_train = 240;
  SparseDataset data = generate_polarity_corpus(co);
  LogregOptions lo;
  lo.max_features = 10;
  const auto model = train_logreg(data, lo);
  const auto instances = interpretable_instances(data, Split::kTest, nullptr, 8);
  ASSERT_EQ(instances.size(), 8u);
  ExplainConfig cfg;
  cfg.n_samples = 400;
  const std::vector<Method> methods{Method::kCle, Method::kLime, Method::kGreedy, Method::kRandom};
  const auto gold = model->gold_features();
  const FaithfulnessResult r =
      eval_faithfulness(*model, instances, methods, cfg, std::set<std::string>(gold.begin(), gold.end()));
  EXPECT_EQ(r.records.size(), 32u);
  EXPECT_EQ(r.fidelity.size(), 2u);
  EXPECT_EQ(to_csv(r).substr(0, to_csv(r).find('\n')),
            "method,recall_mean,recall_se,abs_error_mean,abs_error_se,instances");
  const FaithfulnessResult again =
      eval_faithfulness(*model, instances, methods, cfg, std::set<std::string>(gold.begin(), gold.end()));
  EXPECT_EQ(to_json(r).dump(), to_json(again).dump());
}

TEST(TrustEval, DefaultsAndDeterminism) {
  CorpusOptions co;
  co.n_docs = 200;
  co.n_train = 160;
  SparseDataset data = generate_polarity_corpus(co);
  const auto model = train_logreg(data);
  const auto instances = interpretable_instances(data, Split::kTest, nullptr, 6);
  ExplainConfig cfg;
  cfg.n_samples = 300;
  const std::vector<Method> methods{Method::kLime, Method::kRandom};
  TrustOptions to;
  to.trials = 2;
  const TrustResult a = eval_trust(*model, instances, methods, cfg, to);
  const TrustResult b = eval_trust(*model, instances, methods, cfg, to);
  EXPECT_EQ(to_json(a).dump(), to_json(b).dump());
  EXPECT_EQ(a.trials.size(), 2u);
  EXPECT_GT(a.trials[0].unrelated_keys, 0);
  to.unrelated_fraction = 1.5;
  EXPECT_THROW(eval_trust(*model, instances, methods, cfg, to), Error);
}

}  // namespace
}  // namespace cle
