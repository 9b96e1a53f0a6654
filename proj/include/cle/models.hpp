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

#ifndef CLE_MODELS_HPP_
#define CLE_MODELS_HPP_

#include <cstdint>
#include <filesystem>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include <Eigen/Core>

#include "cle/instance.hpp"
#include "cle/tabular.hpp"

namespace cle {

// The opaque classifier being explained.
class BlackBoxModel {
 public:
  virtual ~BlackBoxModel() = default;

  virtual Modality modality() const = 0;
  virtual const std::vector<std::string>& classes() const = 0;
  // Whether predict_proba may be called from several threads at once.
  virtual bool reentrant() const { return true; }
  // One row per instance, one column per class; rows sum to one.
  virtual Eigen::MatrixXd predict_proba(std::span<const Instance> batch) const = 0;

  int class_count() const { return static_cast<int>(classes().size()); }
};

// ---------------------------------------------------------------------------
// Datasets
// ---------------------------------------------------------------------------

enum class Split { kTrain, kValidation, kTest };

struct SparseDataset {
  Modality modality = Modality::kText;
  std::vector<Instance> instances;
  std::vector<int> labels;  // indices into `classes`
  std::vector<std::string> classes;
  std::vector<Split> splits;
  std::optional<TabularSchema> schema;  // tabular only
  std::vector<std::string> column_names;

  std::size_t size() const { return instances.size(); }
  std::vector<std::size_t> indices(Split split) const;
  // Copy restricted to one split (split tags preserved).
  SparseDataset subset(Split split) const;
  // Throws if labels fall outside classes or lengths disagree.
  void validate() const;
};

// `label<TAB>document` per line; classes sorted lexicographically. Every row
// is tagged kTrain; use assign_splits to partition.
SparseDataset load_text_tsv(const std::filesystem::path& path);
void write_text_tsv(const std::filesystem::path& path, const SparseDataset& dataset);

// CSV with header; `label_column` holds the class. When `schema` is absent
// it is inferred from all rows.
SparseDataset load_tabular_csv(const std::filesystem::path& path, const std::string& label_column,
                               const std::optional<TabularSchema>& schema);

// Tags the first n_train rows kTrain, the next n_validation kValidation and
// the rest kTest.
void assign_splits(SparseDataset& dataset, std::size_t n_train, std::size_t n_validation);

// ---------------------------------------------------------------------------
// Featurization
// ---------------------------------------------------------------------------

// Sorted sparse row.
struct SparseVec {
  std::vector<int> index;
  std::vector<double> value;

  double get(int j) const;
  double dot(const SparseVec& other) const;
  double squared_norm() const;
};

// Text: bag-of-words counts over the training vocabulary (sorted tokens).
// Tabular: one indicator per (column, bin).
class Featurizer {
 public:
  static Featurizer for_text(const std::vector<const std::string*>& training_docs);
  static Featurizer for_tabular(const TabularSchema& schema);
  static Featurizer fit(const SparseDataset& dataset);  // uses the train split

  Modality modality() const { return modality_; }
  int dim() const { return static_cast<int>(names_.size()); }
  const std::string& feature_name(int j) const { return names_[j]; }
  // Key shared with interpretable units: token or column name.
  const std::string& feature_key(int j) const { return keys_[j]; }

  SparseVec transform(const Instance& instance) const;

 private:
  Modality modality_ = Modality::kText;
  std::vector<std::string> names_;
  std::vector<std::string> keys_;
  std::unordered_map<std::string, int> vocabulary_;
  std::optional<TabularSchema> schema_;
  std::vector<int> column_offset_;
};

// Built-in models featurize raw instances and score sparse rows.
class FeaturizedModel : public BlackBoxModel {
 public:
  FeaturizedModel(Featurizer featurizer, std::vector<std::string> classes)
      : featurizer_(std::move(featurizer)), classes_(std::move(classes)) {}

  Modality modality() const override { return featurizer_.modality(); }
  const std::vector<std::string>& classes() const override { return classes_; }
  Eigen::MatrixXd predict_proba(std::span<const Instance> batch) const override;

  const Featurizer& featurizer() const { return featurizer_; }
  virtual Eigen::VectorXd predict_row(const SparseVec& row) const = 0;

 private:
  Featurizer featurizer_;
  std::vector<std::string> classes_;
};

// Models whose decision provably depends on a known feature set.
class GoldFeatureSource {
 public:
  virtual ~GoldFeatureSource() = default;
  // Feature keys in ascending feature-index order.
  virtual std::vector<std::string> gold_features() const = 0;
};

// Throws Unsupported for models without a gold set.
std::vector<std::string> gold_features(const BlackBoxModel& model);

// ---------------------------------------------------------------------------
// Logistic regression
// ---------------------------------------------------------------------------

struct LogregOptions {
  double l2 = 1.0;
  std::optional<int> max_features;
  double grad_tol = 1e-6;
  int max_iter = 5000;
};

// Multinomial logistic loss over sparse rows:
//   (1/n) sum_i -log softmax(W x_i + b)_{y_i} + (l2/2) |W|_F^2
// Parameters are packed as [W row-major (classes x dim), b].
class LogregObjective {
 public:
  LogregObjective(const std::vector<SparseVec>& rows, const std::vector<int>& labels,
                  int classes, int dim, double l2,
                  std::optional<std::vector<int>> allowed_features = std::nullopt);

  Eigen::Index parameter_count() const { return static_cast<Eigen::Index>(classes_) * (dim_ + 1); }
  double value(const Eigen::VectorXd& params) const;
  double value_and_gradient(const Eigen::VectorXd& params, Eigen::VectorXd& gradient) const;

 private:
  const std::vector<SparseVec>* rows_;
  const std::vector<int>* labels_;
  int classes_;
  int dim_;
  double l2_;
  std::vector<char> allowed_;  // empty = all features
};

struct LogregTrace {
  std::vector<double> loss;  // per iteration
  double final_grad_norm = 0;
  bool converged = false;
};

// Gradient descent with Barzilai-Borwein trial steps and Armijo backtracking.
Eigen::VectorXd minimize_logreg(const LogregObjective& objective, Eigen::VectorXd start,
                                const LogregOptions& options, LogregTrace* trace = nullptr);

class LogisticRegression : public FeaturizedModel, public GoldFeatureSource {
 public:
  LogisticRegression(Featurizer featurizer, std::vector<std::string> classes,
                     Eigen::MatrixXd weights, Eigen::VectorXd bias);

  Eigen::VectorXd predict_row(const SparseVec& row) const override;
  std::vector<std::string> gold_features() const override;

  const Eigen::MatrixXd& weights() const { return weights_; }
  const Eigen::VectorXd& bias() const { return bias_; }

 private:
  Eigen::MatrixXd weights_;  // classes x dim
  Eigen::VectorXd bias_;
};

std::shared_ptr<LogisticRegression> train_logreg(const SparseDataset& dataset,
                                                 const LogregOptions& options = {},
                                                 LogregTrace* trace = nullptr);

// ---------------------------------------------------------------------------
// Trees
// ---------------------------------------------------------------------------

struct TreeOptions {
  std::optional<int> max_depth;
  std::optional<int> max_distinct_features;
  int min_samples_split = 2;
  // Candidate features per split; 0 means all features.
  int max_features = 0;
  std::uint64_t seed = 0;
};

struct TreeNode {
  int feature = -1;  // -1 for leaves
  double threshold = 0;  // go left when value <= threshold
  int left = -1;
  int right = -1;
  std::vector<double> probs;
};

// Column-major view of a training sample, shared by tree learners.
struct TrainingMatrix {
  int rows = 0;
  int dim = 0;
  int classes = 0;
  std::vector<SparseVec> row_data;
  std::vector<std::vector<std::pair<int, double>>> columns;  // (row, value), nonzeros only
  std::vector<int> labels;

  TrainingMatrix(std::vector<SparseVec> rows, std::vector<int> labels, int dim, int classes);
};

// Gini impurity of class counts.
double gini(std::span<const double> counts);

// Impurity decrease of splitting `parent` into `left` and the remainder:
// G(parent) - (n_l/n) G(left) - (n_r/n) G(right).
double gini_gain(std::span<const double> parent, std::span<const double> left);

class TreeClassifier {
 public:
  // `sample` lists training rows (with repetition for bootstraps).
  static TreeClassifier grow(const TrainingMatrix& data, const std::vector<int>& sample,
                             const TreeOptions& options);

  const std::vector<double>& leaf_probs(const SparseVec& row) const;
  const std::vector<TreeNode>& nodes() const { return nodes_; }
  std::vector<int> used_features() const;  // ascending
  int depth() const;

 private:
  std::vector<TreeNode> nodes_;
};

class DecisionTree : public FeaturizedModel, public GoldFeatureSource {
 public:
  DecisionTree(Featurizer featurizer, std::vector<std::string> classes, TreeClassifier tree)
      : FeaturizedModel(std::move(featurizer), std::move(classes)), tree_(std::move(tree)) {}

  Eigen::VectorXd predict_row(const SparseVec& row) const override;
  std::vector<std::string> gold_features() const override;
  const TreeClassifier& tree() const { return tree_; }

 private:
  TreeClassifier tree_;
};

std::shared_ptr<DecisionTree> train_tree(const SparseDataset& dataset,
                                         const TreeOptions& options = {});

struct ForestOptions {
  int n_trees = 30;
  bool bootstrap = true;
  // Candidate features per split; 0 means floor(sqrt(dim)), -1 means all.
  int max_features = 0;
  std::optional<int> max_depth;
  std::uint64_t seed = 0;
};

class RandomForest : public FeaturizedModel {
 public:
  RandomForest(Featurizer featurizer, std::vector<std::string> classes,
               std::vector<TreeClassifier> trees, double oob_accuracy)
      : FeaturizedModel(std::move(featurizer), std::move(classes)),
        trees_(std::move(trees)),
        oob_accuracy_(oob_accuracy) {}

  // Fraction of trees voting for each class.
  Eigen::VectorXd predict_row(const SparseVec& row) const override;
  const std::vector<TreeClassifier>& trees() const { return trees_; }
  // NaN when bootstrap is disabled.
  double oob_accuracy() const { return oob_accuracy_; }

 private:
  std::vector<TreeClassifier> trees_;
  double oob_accuracy_;
};

std::shared_ptr<RandomForest> train_forest(const SparseDataset& dataset,
                                           const ForestOptions& options = {});

// Forest training on a pre-built matrix; used when many forests share data.
std::shared_ptr<RandomForest> train_forest(const Featurizer& featurizer,
                                           const std::vector<std::string>& classes,
                                           const TrainingMatrix& data,
                                           const ForestOptions& options);

// ---------------------------------------------------------------------------
// k nearest neighbours
// ---------------------------------------------------------------------------

class NearestNeighbors : public FeaturizedModel {
 public:
  NearestNeighbors(Featurizer featurizer, std::vector<std::string> classes,
                   std::vector<SparseVec> rows, std::vector<int> labels, int k);

  Eigen::VectorXd predict_row(const SparseVec& row) const override;
  // Indices of the k most cosine-similar training rows, ties to lower index.
  std::vector<int> neighbors(const SparseVec& row) const;
  int k() const { return k_; }

 private:
  std::vector<SparseVec> rows_;  // L2-normalized
  std::vector<int> labels_;
  std::vector<std::vector<std::pair<int, double>>> postings_;
  int k_;
};

std::shared_ptr<NearestNeighbors> train_knn(const SparseDataset& dataset, int k = 5);

// ---------------------------------------------------------------------------
// Callable-backed models
// ---------------------------------------------------------------------------

class FunctionModel : public BlackBoxModel {
 public:
  using Scorer = std::function<std::vector<double>(const Instance&)>;

  FunctionModel(Modality modality, std::vector<std::string> classes, Scorer scorer)
      : modality_(modality), classes_(std::move(classes)), scorer_(std::move(scorer)) {}

  Modality modality() const override { return modality_; }
  const std::vector<std::string>& classes() const override { return classes_; }
  Eigen::MatrixXd predict_proba(std::span<const Instance> batch) const override;

 private:
  Modality modality_;
  std::vector<std::string> classes_;
  Scorer scorer_;
};

// Two-class text model with a planted word interaction:
// p(positive) = 0.5 + 0.15 [not] - 0.3 [bad] + 0.45 [not AND bad]
//               + 0.3 [good] - 0.4 [not AND good], clipped to [0.02, 0.98].
std::shared_ptr<FunctionModel> toy_sentiment_model();

}  // namespace cle

#endif  // CLE_MODELS_HPP_
