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
#include <map>
#include <set>

#include "cle/error.hpp"
#include "cle/models.hpp"
#include "cle/repr.hpp"

namespace cle {

double SparseVec::get(int j) const {
  const auto it = std::lower_bound(index.begin(), index.end(), j);
  if (it == index.end() || *it != j) return 0.0;
  return value[static_cast<std::size_t>(it - index.begin())];
}

double SparseVec::dot(const SparseVec& other) const {
  double sum = 0;
  std::size_t a = 0, b = 0;
  while (a < index.size() && b < other.index.size()) {
    if (index[a] == other.index[b]) {
      sum += value[a++] * other.value[b++];
    } else if (index[a] < other.index[b]) {
      ++a;
    } else {
      ++b;
    }
  }
  return sum;
}

double SparseVec::squared_norm() const {
  double sum = 0;
  for (double v : value) sum += v * v;
  return sum;
}

Featurizer Featurizer::for_text(const std::vector<const std::string*>& training_docs) {
  std::set<std::string> tokens;
  for (const std::string* doc : training_docs) {
    for (const Token& token : tokenize(*doc)) tokens.insert(token.text);
  }
  Featurizer f;
  f.modality_ = Modality::kText;
  f.names_.assign(tokens.begin(), tokens.end());
  f.keys_ = f.names_;
  for (std::size_t j = 0; j < f.names_.size(); ++j) {
    f.vocabulary_.emplace(f.names_[j], static_cast<int>(j));
  }
  return f;
}

Featurizer Featurizer::for_tabular(const TabularSchema& schema) {
  Featurizer f;
  f.modality_ = Modality::kTabular;
  f.schema_ = schema;
  for (const ColumnSpec& column : schema.columns) {
    f.column_offset_.push_back(static_cast<int>(f.names_.size()));
    for (int b = 0; b < column.bin_count(); ++b) {
      f.names_.push_back(column.bin_label(b));
      f.keys_.push_back(column.name);
    }
  }
  return f;
}

Featurizer Featurizer::fit(const SparseDataset& dataset) {
  if (dataset.modality == Modality::kText) {
    std::vector<const std::string*> docs;
    for (std::size_t i : dataset.indices(Split::kTrain)) {
      docs.push_back(&std::get<std::string>(dataset.instances[i]));
    }
    return for_text(docs);
  }
  if (dataset.modality == Modality::kTabular) {
    if (!dataset.schema) throw Error(ErrorCode::kMissingContext, "tabular dataset without schema");
    return for_tabular(*dataset.schema);
  }
  throw Error(ErrorCode::kUnsupported, "built-in models do not featurize images");
}

SparseVec Featurizer::transform(const Instance& instance) const {
  if (modality_of(instance) != modality_) {
    throw Error(ErrorCode::kModelFailure, "instance modality does not match the model");
  }
  SparseVec out;
  if (modality_ == Modality::kText) {
    std::map<int, double> counts;
    for (const Token& token : tokenize(std::get<std::string>(instance))) {
      const auto it = vocabulary_.find(token.text);
      if (it != vocabulary_.end()) counts[it->second] += 1.0;
    }
    for (const auto& [j, v] : counts) {
      out.index.push_back(j);
      out.value.push_back(v);
    }
    return out;
  }
  const auto& row = std::get<TabularRow>(instance);
  if (row.values.size() != schema_->columns.size()) {
    throw Error(ErrorCode::kSchemaMismatch, "row width does not match schema");
  }
  for (std::size_t c = 0; c < row.values.size(); ++c) {
    out.index.push_back(column_offset_[c] + assign_bin(schema_->columns[c], row.values[c]).bin);
    out.value.push_back(1.0);
  }
  return out;
}

Eigen::MatrixXd FeaturizedModel::predict_proba(std::span<const Instance> batch) const {
  Eigen::MatrixXd out(static_cast<Eigen::Index>(batch.size()), class_count());
  for (std::size_t i = 0; i < batch.size(); ++i) {
    out.row(static_cast<Eigen::Index>(i)) = predict_row(featurizer_.transform(batch[i])).transpose();
  }
  return out;
}

std::vector<std::string> gold_features(const BlackBoxModel& model) {
  const auto* source = dynamic_cast<const GoldFeatureSource*>(&model);
  if (source == nullptr) {
    throw Error(ErrorCode::kUnsupported, "model does not expose gold features");
  }
  return source->gold_features();
}

Eigen::MatrixXd FunctionModel::predict_proba(std::span<const Instance> batch) const {
  Eigen::MatrixXd out(static_cast<Eigen::Index>(batch.size()), class_count());
  for (std::size_t i = 0; i < batch.size(); ++i) {
    const std::vector<double> probs = scorer_(batch[i]);
    if (static_cast<int>(probs.size()) != class_count()) {
      throw Error(ErrorCode::kModelFailure, "scorer returned wrong class count");
    }
    for (int c = 0; c < class_count(); ++c) out(static_cast<Eigen::Index>(i), c) = probs[c];
  }
  return out;
}

std::shared_ptr<FunctionModel> toy_sentiment_model() {
  return std::make_shared<FunctionModel>(
      Modality::kText, std::vector<std::string>{"negative", "positive"},
      [](const Instance& instance) {
        bool has_not = false, has_bad = false, has_good = false;
        for (const Token& token : tokenize(std::get<std::string>(instance))) {
          has_not |= token.text == "not";
          has_bad |= token.text == "bad";
          has_good |= token.text == "good";
        }
        double p = 0.5 + 0.15 * has_not - 0.3 * has_bad + 0.45 * (has_not && has_bad) +
                   0.3 * has_good - 0.4 * (has_not && has_good);
        p = std::clamp(p, 0.02, 0.98);
        return std::vector<double>{1.0 - p, p};
      });
}

}  // namespace cle
