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

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <set>

#include "cle/error.hpp"
#include "cle/models.hpp"

namespace cle {

TrainingMatrix::TrainingMatrix(std::vector<SparseVec> rows, std::vector<int> labels_in, int dim_in,
                               int classes_in)
    : rows(static_cast<int>(rows.size())),
      dim(dim_in),
      classes(classes_in),
      row_data(std::move(rows)),
      columns(static_cast<std::size_t>(dim_in)),
      labels(std::move(labels_in)) {
  for (int i = 0; i < this->rows; ++i) {
    const SparseVec& row = row_data[i];
    for (std::size_t t = 0; t < row.index.size(); ++t) {
      if (row.value[t] != 0.0) columns[row.index[t]].emplace_back(i, row.value[t]);
    }
  }
}

double gini(std::span<const double> counts) {
  double total = 0, sq = 0;
  for (double c : counts) {
    total += c;
    sq += c * c;
  }
  return total <= 0 ? 0.0 : 1.0 - sq / (total * total);
}

double gini_gain(std::span<const double> parent, std::span<const double> left) {
  std::vector<double> right(parent.size());
  double n = 0, nl = 0;
  for (std::size_t c = 0; c < parent.size(); ++c) {
    right[c] = parent[c] - left[c];
    n += parent[c];
    nl += left[c];
  }
  if (n <= 0) return 0.0;
  return gini(parent) - (nl / n) * gini(left) - ((n - nl) / n) * gini(right);
}

namespace {

struct SplitChoice {
  int feature = -1;
  double threshold = 0;
  double gain = 0;
};

class TreeGrower {
 public:
  TreeGrower(const TrainingMatrix& data, const TreeOptions& options)
      : data_(data), options_(options), multiplicity_(data.rows, 0), rng_(options.seed) {}

  std::vector<TreeNode> grow(const std::vector<int>& sample) {
    struct Pending {
      int node;
      std::vector<int> rows;
      int depth;
    };
    std::vector<TreeNode> nodes(1);
    std::vector<Pending> stack;
    stack.push_back({0, sample, 0});
    while (!stack.empty()) {
      Pending item = std::move(stack.back());
      stack.pop_back();
      std::vector<double> counts(data_.classes, 0.0);
      for (int r : item.rows) counts[data_.labels[r]] += 1.0;
      const double total = static_cast<double>(item.rows.size());
      nodes[item.node].probs.resize(data_.classes);
      for (int c = 0; c < data_.classes; ++c) {
        nodes[item.node].probs[c] = total > 0 ? counts[c] / total : 1.0 / data_.classes;
      }
      const bool pure = std::count_if(counts.begin(), counts.end(), [](double c) { return c > 0; }) <= 1;
      if (pure || static_cast<int>(item.rows.size()) < options_.min_samples_split ||
          (options_.max_depth && item.depth >= *options_.max_depth)) {
        continue;
      }
      const SplitChoice split = best_split(item.rows, counts);
      if (split.feature < 0) continue;
      if (used_.insert(split.feature).second) used_order_.push_back(split.feature);

      std::vector<int> left_rows, right_rows;
      for (int r : item.rows) {
        (data_.row_data[r].get(split.feature) <= split.threshold ? left_rows : right_rows).push_back(r);
      }
      const int left = static_cast<int>(nodes.size());
      nodes.emplace_back();
      nodes.emplace_back();
      nodes[item.node].feature = split.feature;
      nodes[item.node].threshold = split.threshold;
      nodes[item.node].left = left;
      nodes[item.node].right = left + 1;
      // Right is pushed first so the left subtree is grown first.
      stack.push_back({left + 1, std::move(right_rows), item.depth + 1});
      stack.push_back({left, std::move(left_rows), item.depth + 1});
    }
    return nodes;
  }

 private:
  std::vector<int> candidate_features() {
    const bool budget_spent = options_.max_distinct_features &&
                              static_cast<int>(used_.size()) >= *options_.max_distinct_features;
    std::vector<int> pool;
    if (budget_spent) {
      pool.assign(used_.begin(), used_.end());
    } else {
      pool.resize(data_.dim);
      std::iota(pool.begin(), pool.end(), 0);
    }
    const int want = options_.max_features;
    if (want > 0 && want < static_cast<int>(pool.size())) {
      for (int t = 0; t < want; ++t) {
        std::uniform_int_distribution<int> pick(t, static_cast<int>(pool.size()) - 1);
        std::swap(pool[t], pool[pick(rng_)]);
      }
      pool.resize(want);
      std::sort(pool.begin(), pool.end());
    }
    return pool;
  }

  SplitChoice best_split(const std::vector<int>& rows, const std::vector<double>& counts) {
    for (int r : rows) ++multiplicity_[r];
    SplitChoice best;
    const double total = static_cast<double>(rows.size());
    std::vector<std::pair<double, int>> entries;  // (value, row)
    std::vector<double> left(data_.classes);
    for (int f : candidate_features()) {
      entries.clear();
      for (const auto& [r, v] : data_.columns[f]) {
        if (multiplicity_[r] > 0) entries.emplace_back(v, r);
      }
      if (entries.empty()) continue;
      double nonzero = 0;
      for (const auto& e : entries) nonzero += multiplicity_[e.second];
      const double zeros = total - nonzero;
      std::sort(entries.begin(), entries.end());

      // Groups of equal value in ascending order; the zero group is virtual.
      std::fill(left.begin(), left.end(), 0.0);
      double left_n = 0;
      bool zero_done = zeros <= 0;
      std::size_t t = 0;
      double prev_value = std::numeric_limits<double>::quiet_NaN();
      const auto consider = [&](double next_value) {
        if (left_n <= 0 || left_n >= total || std::isnan(prev_value)) return;
        const double gain = gini_gain(counts, left);
        if (gain > best.gain + 1e-12) {
          best = {f, 0.5 * (prev_value + next_value), gain};
        }
      };
      while (t < entries.size() || !zero_done) {
        double value;
        if (!zero_done && (t >= entries.size() || entries[t].first > 0.0)) {
          value = 0.0;
          consider(value);
          // Zero-valued rows: node counts minus nonzero rows' counts.
          std::vector<double> zero_counts = counts;
          for (const auto& e : entries) zero_counts[data_.labels[e.second]] -= multiplicity_[e.second];
          for (int c = 0; c < data_.classes; ++c) left[c] += zero_counts[c];
          left_n += zeros;
          zero_done = true;
        } else {
          value = entries[t].first;
          consider(value);
          while (t < entries.size() && entries[t].first == value) {
            left[data_.labels[entries[t].second]] += multiplicity_[entries[t].second];
            left_n += multiplicity_[entries[t].second];
            ++t;
          }
        }
        prev_value = value;
      }
    }
    for (int r : rows) multiplicity_[r] = 0;
    return best;
  }

  const TrainingMatrix& data_;
  const TreeOptions& options_;
  std::vector<int> multiplicity_;
  std::set<int> used_;
  std::vector<int> used_order_;
  Rng rng_;
};

void require_two_classes(const std::vector<int>& labels) {
  const std::set<int> distinct(labels.begin(), labels.end());
  if (distinct.size() < 2) {
    throw Error(ErrorCode::kSingleClass, "training labels contain a single class");
  }
}

TrainingMatrix training_matrix(const SparseDataset& dataset, const Featurizer& featurizer) {
  std::vector<SparseVec> rows;
  std::vector<int> labels;
  for (std::size_t i : dataset.indices(Split::kTrain)) {
    rows.push_back(featurizer.transform(dataset.instances[i]));
    labels.push_back(dataset.labels[i]);
  }
  require_two_classes(labels);
  return TrainingMatrix(std::move(rows), std::move(labels), featurizer.dim(),
                        static_cast<int>(dataset.classes.size()));
}

int argmax(const std::vector<double>& v) {
  return static_cast<int>(std::max_element(v.begin(), v.end()) - v.begin());
}

}  // namespace

TreeClassifier TreeClassifier::grow(const TrainingMatrix& data, const std::vector<int>& sample,
                                    const TreeOptions& options) {
  TreeClassifier tree;
  tree.nodes_ = TreeGrower(data, options).grow(sample);
  return tree;
}

const std::vector<double>& TreeClassifier::leaf_probs(const SparseVec& row) const {
  int node = 0;
  while (nodes_[node].feature >= 0) {
    node = row.get(nodes_[node].feature) <= nodes_[node].threshold ? nodes_[node].left
                                                                   : nodes_[node].right;
  }
  return nodes_[node].probs;
}

std::vector<int> TreeClassifier::used_features() const {
  std::set<int> used;
  for (const auto& node : nodes_) {
    if (node.feature >= 0) used.insert(node.feature);
  }
  return {used.begin(), used.end()};
}

int TreeClassifier::depth() const {
  std::vector<int> depth(nodes_.size(), 0);
  int best = 0;
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    if (nodes_[i].feature < 0) continue;
    depth[nodes_[i].left] = depth[nodes_[i].right] = depth[i] + 1;
    best = std::max(best, depth[i] + 1);
  }
  return best;
}

Eigen::VectorXd DecisionTree::predict_row(const SparseVec& row) const {
  const auto& probs = tree_.leaf_probs(row);
  return Eigen::Map<const Eigen::VectorXd>(probs.data(), static_cast<Eigen::Index>(probs.size()));
}

std::vector<std::string> DecisionTree::gold_features() const {
  std::vector<std::string> out;
  for (int j : tree_.used_features()) {
    const std::string& key = featurizer().feature_key(j);
    if (std::find(out.begin(), out.end(), key) == out.end()) out.push_back(key);
  }
  return out;
}

std::shared_ptr<DecisionTree> train_tree(const SparseDataset& dataset, const TreeOptions& options) {
  dataset.validate();
  Featurizer featurizer = Featurizer::fit(dataset);
  const TrainingMatrix data = training_matrix(dataset, featurizer);
  std::vector<int> sample(data.rows);
  std::iota(sample.begin(), sample.end(), 0);
  TreeClassifier tree = TreeClassifier::grow(data, sample, options);
  return std::make_shared<DecisionTree>(std::move(featurizer), dataset.classes, std::move(tree));
}

Eigen::VectorXd RandomForest::predict_row(const SparseVec& row) const {
  Eigen::VectorXd votes = Eigen::VectorXd::Zero(class_count());
  for (const auto& tree : trees_) votes(argmax(tree.leaf_probs(row))) += 1.0;
  return votes / static_cast<double>(trees_.size());
}

std::shared_ptr<RandomForest> train_forest(const Featurizer& featurizer,
                                           const std::vector<std::string>& classes,
                                           const TrainingMatrix& data,
                                           const ForestOptions& options) {
  if (options.n_trees < 1) throw Error(ErrorCode::kConfigError, "forest needs at least one tree");
  TreeOptions tree_options;
  tree_options.max_depth = options.max_depth;
  tree_options.max_features =
      options.max_features < 0   ? 0
      : options.max_features == 0 ? std::max(1, static_cast<int>(std::sqrt(static_cast<double>(data.dim))))
                                  : options.max_features;
  std::vector<TreeClassifier> trees;
  std::vector<std::vector<double>> oob_votes(data.rows, std::vector<double>(data.classes, 0.0));
  for (int t = 0; t < options.n_trees; ++t) {
    const std::uint64_t seed = mix_seed(options.seed, static_cast<std::uint64_t>(t));
    std::vector<int> sample(data.rows);
    std::vector<char> in_bag(data.rows, 0);
    if (options.bootstrap) {
      Rng rng(seed);
      std::uniform_int_distribution<int> pick(0, data.rows - 1);
      for (int& r : sample) {
        r = pick(rng);
        in_bag[r] = 1;
      }
      std::sort(sample.begin(), sample.end());
    } else {
      std::iota(sample.begin(), sample.end(), 0);
    }
    tree_options.seed = mix_seed(seed, 0xF0F0);
    trees.push_back(TreeClassifier::grow(data, sample, tree_options));
    if (options.bootstrap) {
      for (int r = 0; r < data.rows; ++r) {
        if (!in_bag[r]) oob_votes[r][argmax(trees.back().leaf_probs(data.row_data[r]))] += 1.0;
      }
    }
  }
  double oob = std::numeric_limits<double>::quiet_NaN();
  if (options.bootstrap) {
    int seen = 0, correct = 0;
    for (int r = 0; r < data.rows; ++r) {
      const double total = std::accumulate(oob_votes[r].begin(), oob_votes[r].end(), 0.0);
      if (total == 0) continue;
      ++seen;
      correct += argmax(oob_votes[r]) == data.labels[r];
    }
    if (seen > 0) oob = static_cast<double>(correct) / seen;
  }
  return std::make_shared<RandomForest>(featurizer, classes, std::move(trees), oob);
}

std::shared_ptr<RandomForest> train_forest(const SparseDataset& dataset, const ForestOptions& options) {
  dataset.validate();
  Featurizer featurizer = Featurizer::fit(dataset);
  const TrainingMatrix data = training_matrix(dataset, featurizer);
  return train_forest(featurizer, dataset.classes, data, options);
}

}  // namespace cle
