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
#include <numeric>
#include <random>
#include <set>

#include "cle/error.hpp"
#include "cle/eval.hpp"
#include "cle/models.hpp"

namespace cle {
namespace {

SparseDataset text_dataset(const std::vector<std::pair<int, std::string>>& docs) {
  SparseDataset d;
  d.modality = Modality::kText;
  d.classes = {"neg", "pos"};
  for (const auto& [label, text] : docs) {
    d.instances.emplace_back(text);
    d.labels.push_back(label);
    d.splits.push_back(Split::kTrain);
  }
  return d;
}

// Label 1 iff "good" present; filler tokens f0..f19 random.
SparseDataset planted_dataset(int n, std::uint64_t seed, std::vector<std::string> informative = {"good"}) {
  Rng rng(seed);
  std::vector<std::pair<int, std::string>> docs;
  for (int i = 0; i < n; ++i) {
    const int label = i % 2;
    std::string doc;
    for (int j = 0; j < 20; ++j) {
      if (rng() % 3 == 0) doc += "f" + std::to_string(j) + " ";
    }
    for (const std::string& w : informative) {
      if ((rng() % 10 < 9) == (label == 1)) doc += w + " ";
    }
    doc += "end";
    docs.emplace_back(label, doc);
  }
  return text_dataset(docs);
}

TEST(Dataset, SplitsAndValidation) {
  SparseDataset d = planted_dataset(10, 1);
  assign_splits(d, 6, 2);
  EXPECT_EQ(d.indices(Split::kTrain).size(), 6u);
  EXPECT_EQ(d.indices(Split::kValidation).size(), 2u);
  EXPECT_EQ(d.subset(Split::kTest).size(), 2u);
  d.labels[0] = 7;
  EXPECT_THROW(d.validate(), Error);
}

TEST(Featurizer, TextCountsAndKeys) {
  SparseDataset d = text_dataset({{0, "a b b"}, {1, "c"}});
  const Featurizer f = Featurizer::fit(d);
  ASSERT_EQ(f.dim(), 3);
  EXPECT_EQ(f.feature_key(1), "b");
  const SparseVec v = f.transform(std::string("b b b z"));
  EXPECT_EQ(v.get(1), 3.0);
  EXPECT_EQ(v.get(0), 0.0);
}

TEST(Logreg, GradientMatchesCentralDifferences) {
  std::mt19937_64 rng(3);
  std::normal_distribution<double> g(0, 1);
  std::vector<SparseVec> rows;
  std::vector<int> labels;
  for (int i = 0; i < 40; ++i) {
    SparseVec r;
    for (int j = 0; j < 6; ++j) {
      if (rng() % 2) {
        r.index.push_back(j);
        r.value.push_back(1 + rng() % 3);
      }
    }
    rows.push_back(r);
    labels.push_back(static_cast<int>(rng() % 3));
  }
  const LogregObjective obj(rows, labels, 3, 6, 0.3);
  for (int t = 0; t < 20; ++t) {
    Eigen::VectorXd p(obj.parameter_count());
    for (Eigen::Index i = 0; i < p.size(); ++i) p(i) = g(rng);
    Eigen::VectorXd grad;
    obj.value_and_gradient(p, grad);
    Eigen::VectorXd fd(p.size());
    const double h = 1e-5;
    for (Eigen::Index i = 0; i < p.size(); ++i) {
      Eigen::VectorXd a = p, b = p;
      a(i) += h;
      b(i) -= h;
      fd(i) = (obj.value(a) - obj.value(b)) / (2 * h);
    }
    EXPECT_LT((grad - fd).norm() / std::max(fd.norm(), 1e-12), 1e-5);
  }
}

TEST(Logreg, FeatureCapAndPlantedGold) {
  const SparseDataset d = planted_dataset(400, 4, {"good", "great", "fine"});
  LogregOptions options;
  options.max_features = 10;
  const auto model = train_logreg(d, options);
  const std::vector<std::string> gold = model->gold_features();
  EXPECT_LE(gold.size(), 10u);
  const std::set<std::string> g(gold.begin(), gold.end());
  for (const char* w : {"good", "great", "fine"}) EXPECT_TRUE(g.count(w)) << w;
  EXPECT_GT(accuracy(*model, d, Split::kTrain), 0.9);
}

TEST(Logreg, DescentConverges) {
  const SparseDataset d = planted_dataset(200, 5);
  LogregTrace trace;
  train_logreg(d, {}, &trace);
  EXPECT_TRUE(trace.converged);
  for (std::size_t i = 1; i < trace.loss.size(); ++i) EXPECT_LE(trace.loss[i], trace.loss[i - 1] + 1e-12);
}

TEST(Tree, GiniByHand) {
  // Parent 4/4, left 3 pos + 1 neg: G=0.5, G(left)=G(right)=0.375.
  const double parent[] = {4, 4}, left[] = {1, 3};
  EXPECT_DOUBLE_EQ(gini(parent), 0.5);
  EXPECT_DOUBLE_EQ(gini(left), 0.375);
  EXPECT_DOUBLE_EQ(gini_gain(parent, left), 0.125);
  const double pure[] = {4, 0};
  EXPECT_DOUBLE_EQ(gini_gain(parent, pure), 0.5);
}

TEST(Tree, PureSplitIsDepthOne) {
  const SparseDataset d = text_dataset({{0, "x a"}, {0, "x b"}, {1, "x good"}, {1, "x good b"}});
  const auto tree = train_tree(d);
  EXPECT_EQ(tree->tree().depth(), 1);
  EXPECT_EQ(tree->gold_features(), (std::vector<std::string>{"good"}));
}

TEST(Tree, DistinctFeatureBudget) {
  const SparseDataset d = planted_dataset(300, 6);
  TreeOptions options;
  options.max_distinct_features = 3;
  EXPECT_LE(train_tree(d, options)->gold_features().size(), 3u);
  options.max_distinct_features = 10;
  EXPECT_LE(train_tree(d, options)->gold_features().size(), 10u);
}

TEST(Tree, SingleClassThrows) {
  const SparseDataset d = text_dataset({{1, "a"}, {1, "b"}});
  try {
    train_tree(d);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kSingleClass);
  }
}

TEST(Forest, DegenerateEqualsTree) {
  const SparseDataset d = planted_dataset(200, 7);
  ForestOptions fo;
  fo.n_trees = 1;
  fo.bootstrap = false;
  fo.max_features = -1;
  const auto forest = train_forest(d, fo);
  const auto tree = train_tree(d);
  std::vector<Instance> all(d.instances.begin(), d.instances.end());
  EXPECT_EQ(forest->predict_proba(all), tree->predict_proba(all));
}

TEST(Forest, SeedDeterminismAndOob) {
  SparseDataset d = planted_dataset(600, 8);
  assign_splits(d, 400, 0);
  ForestOptions fo;
  fo.seed = 5;
  const auto a = train_forest(d, fo), b = train_forest(d, fo);
  std::vector<Instance> all(d.instances.begin(), d.instances.end());
  EXPECT_EQ(a->predict_proba(all), b->predict_proba(all));
  EXPECT_NEAR(a->oob_accuracy(), accuracy(*a, d, Split::kTest), 0.10);
  EXPECT_THROW(gold_features(*a), Error);
}

TEST(Knn, ExactMatchAndPrior) {
  SparseDataset d = text_dataset({{0, "a b"}, {1, "c d"}, {1, "c e"}, {0, "a f"}, {1, "g"}});
  const auto one = train_knn(d, 1);
  const Instance q = std::string("c d");
  const Eigen::MatrixXd p = one->predict_proba(std::span<const Instance>(&q, 1));
  EXPECT_EQ(p(0, 1), 1.0);
  const auto all = train_knn(d, 5);
  const Eigen::MatrixXd prior = all->predict_proba(std::span<const Instance>(&q, 1));
  EXPECT_DOUBLE_EQ(prior(0, 1), 0.6);
}

TEST(Knn, NeighborsMatchBruteForceSort) {
  Rng rng(9);
  std::vector<std::pair<int, std::string>> docs;
  for (int i = 0; i < 10; ++i) {
    std::string s;
    for (int j = 0; j < 5; ++j) {
      const int c = static_cast<int>(rng() % 3);
      for (int r = 0; r < c; ++r) s += "w" + std::to_string(j) + " ";
    }
    docs.emplace_back(i % 2, s + "z");
  }
  const SparseDataset d = text_dataset(docs);
  const auto knn = train_knn(d, 4);
  const Featurizer& f = knn->featurizer();
  const SparseVec q = f.transform(std::string("w0 w0 w3 z"));
  std::vector<std::pair<double, int>> scored;
  for (int i = 0; i < 10; ++i) {
    const SparseVec r = f.transform(d.instances[i]);
    scored.push_back({-q.dot(r) / std::sqrt(q.squared_norm() * r.squared_norm()), i});
  }
  std::sort(scored.begin(), scored.end(), [](auto a, auto b) {
    if (std::abs(a.first - b.first) > 1e-12) return a.first < b.first;
    return a.second < b.second;
  });
  std::vector<int> expect;
  for (int i = 0; i < 4; ++i) expect.push_back(scored[i].second);
  EXPECT_EQ(knn->neighbors(q), expect);
}

TEST(ToyModel, PlantedInteraction) {
  const auto toy = toy_sentiment_model();
  const std::vector<Instance> docs{std::string("not bad"), std::string("bad"), std::string("not"),
                                   std::string("good"), std::string("not good")};
  const Eigen::MatrixXd p = toy->predict_proba(docs);
  EXPECT_NEAR(p(0, 1), 0.8, 1e-12);
  EXPECT_NEAR(p(1, 1), 0.2, 1e-12);
  EXPECT_NEAR(p(2, 1), 0.65, 1e-12);
  EXPECT_NEAR(p(3, 1), 0.8, 1e-12);
  EXPECT_NEAR(p(4, 1), 0.55, 1e-12);
  for (Eigen::Index i = 0; i < p.rows(); ++i) EXPECT_NEAR(p.row(i).sum(), 1.0, 1e-12);
}

}  // namespace
}  // namespace cle
