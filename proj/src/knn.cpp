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
#include <numeric>

#include "cle/error.hpp"
#include "cle/models.hpp"

namespace cle {

namespace {

SparseVec normalized(SparseVec row) {
  const double norm = std::sqrt(row.squared_norm());
  if (norm > 0) {
    for (double& v : row.value) v /= norm;
  }
  return row;
}

}  // namespace

NearestNeighbors::NearestNeighbors(Featurizer featurizer, std::vector<std::string> classes,
                                   std::vector<SparseVec> rows, std::vector<int> labels, int k)
    : FeaturizedModel(std::move(featurizer), std::move(classes)),
      labels_(std::move(labels)),
      postings_(static_cast<std::size_t>(this->featurizer().dim())),
      k_(k) {
  if (k < 1) throw Error(ErrorCode::kConfigError, "k must be positive");
  if (rows.size() != labels_.size()) throw Error(ErrorCode::kLengthMismatch, "rows and labels differ");
  rows_.reserve(rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    rows_.push_back(normalized(std::move(rows[i])));
    const SparseVec& row = rows_.back();
    for (std::size_t t = 0; t < row.index.size(); ++t) {
      postings_[row.index[t]].emplace_back(static_cast<int>(i), row.value[t]);
    }
  }
}

std::vector<int> NearestNeighbors::neighbors(const SparseVec& query) const {
  const SparseVec q = normalized(query);
  std::vector<double> score(rows_.size(), 0.0);
  for (std::size_t t = 0; t < q.index.size(); ++t) {
    if (q.index[t] < 0 || q.index[t] >= static_cast<int>(postings_.size())) continue;
    for (const auto& [r, v] : postings_[q.index[t]]) score[r] += v * q.value[t];
  }
  std::vector<int> order(rows_.size());
  std::iota(order.begin(), order.end(), 0);
  const auto take = std::min<std::size_t>(static_cast<std::size_t>(k_), order.size());
  std::partial_sort(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(take), order.end(),
                    [&](int a, int b) { return score[a] != score[b] ? score[a] > score[b] : a < b; });
  order.resize(take);
  return order;
}

Eigen::VectorXd NearestNeighbors::predict_row(const SparseVec& row) const {
  Eigen::VectorXd votes = Eigen::VectorXd::Zero(class_count());
  const std::vector<int> nearest = neighbors(row);
  for (int r : nearest) votes(labels_[r]) += 1.0;
  return votes / static_cast<double>(nearest.size());
}

std::shared_ptr<NearestNeighbors> train_knn(const SparseDataset& dataset, int k) {
  dataset.validate();
  Featurizer featurizer = Featurizer::fit(dataset);
  std::vector<SparseVec> rows;
  std::vector<int> labels;
  for (std::size_t i : dataset.indices(Split::kTrain)) {
    rows.push_back(featurizer.transform(dataset.instances[i]));
    labels.push_back(dataset.labels[i]);
  }
  if (rows.empty()) throw Error(ErrorCode::kConfigError, "no training rows");
  return std::make_shared<NearestNeighbors>(std::move(featurizer), dataset.classes, std::move(rows),
                                            std::move(labels), k);
}

}  // namespace cle
