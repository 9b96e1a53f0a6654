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
#include <set>

#include "cle/error.hpp"
#include "cle/models.hpp"

namespace cle {

namespace {

// Numerically stable softmax of `logits` written into `probs`; returns log-sum-exp.
double softmax(const Eigen::VectorXd& logits, Eigen::VectorXd& probs) {
  const double peak = logits.maxCoeff();
  probs = (logits.array() - peak).exp();
  const double sum = probs.sum();
  probs /= sum;
  return peak + std::log(sum);
}

void require_two_classes(const std::vector<int>& labels) {
  const std::set<int> distinct(labels.begin(), labels.end());
  if (distinct.size() < 2) {
    throw Error(ErrorCode::kSingleClass, "training labels contain a single class");
  }
}

}  // namespace

LogregObjective::LogregObjective(const std::vector<SparseVec>& rows, const std::vector<int>& labels,
                                 int classes, int dim, double l2,
                                 std::optional<std::vector<int>> allowed_features)
    : rows_(&rows), labels_(&labels), classes_(classes), dim_(dim), l2_(l2) {
  if (allowed_features) {
    allowed_.assign(dim, 0);
    for (int j : *allowed_features) allowed_.at(j) = 1;
  }
}

double LogregObjective::value(const Eigen::VectorXd& params) const {
  Eigen::VectorXd unused;
  return value_and_gradient(params, unused);
}

double LogregObjective::value_and_gradient(const Eigen::VectorXd& params,
                                           Eigen::VectorXd& gradient) const {
  const Eigen::Index bias_offset = static_cast<Eigen::Index>(classes_) * dim_;
  gradient = Eigen::VectorXd::Zero(parameter_count());
  const auto n = static_cast<double>(rows_->size());
  double loss = 0;
  Eigen::VectorXd logits(classes_), probs(classes_);
  for (std::size_t i = 0; i < rows_->size(); ++i) {
    const SparseVec& row = (*rows_)[i];
    for (int c = 0; c < classes_; ++c) {
      double z = params(bias_offset + c);
      const Eigen::Index base = static_cast<Eigen::Index>(c) * dim_;
      for (std::size_t t = 0; t < row.index.size(); ++t) z += params(base + row.index[t]) * row.value[t];
      logits(c) = z;
    }
    const double lse = softmax(logits, probs);
    const int label = (*labels_)[i];
    loss += lse - logits(label);
    probs(label) -= 1.0;
    for (int c = 0; c < classes_; ++c) {
      const double r = probs(c) / n;
      gradient(bias_offset + c) += r;
      const Eigen::Index base = static_cast<Eigen::Index>(c) * dim_;
      for (std::size_t t = 0; t < row.index.size(); ++t) gradient(base + row.index[t]) += r * row.value[t];
    }
  }
  loss /= n;
  const auto weights = params.head(bias_offset);
  loss += 0.5 * l2_ * weights.squaredNorm();
  gradient.head(bias_offset) += l2_ * weights;
  if (!allowed_.empty()) {
    for (int c = 0; c < classes_; ++c) {
      for (int j = 0; j < dim_; ++j) {
        if (allowed_[j] == 0) gradient(static_cast<Eigen::Index>(c) * dim_ + j) = 0.0;
      }
    }
  }
  return loss;
}

Eigen::VectorXd minimize_logreg(const LogregObjective& objective, Eigen::VectorXd x,
                                const LogregOptions& options, LogregTrace* trace) {
  if (x.size() != objective.parameter_count()) x = Eigen::VectorXd::Zero(objective.parameter_count());
  Eigen::VectorXd grad, prev_x, prev_grad, trial_grad;
  double loss = objective.value_and_gradient(x, grad);
  double step = 1.0;
  bool converged = false;
  for (int iter = 0; iter < options.max_iter; ++iter) {
    if (trace != nullptr) trace->loss.push_back(loss);
    const double grad_sq = grad.squaredNorm();
    if (std::sqrt(grad_sq) < options.grad_tol) {
      converged = true;
      break;
    }
    if (iter > 0) {
      const Eigen::VectorXd s = x - prev_x;
      const Eigen::VectorXd y = grad - prev_grad;
      const double sy = s.dot(y);
      step = sy > 0 ? s.squaredNorm() / sy : 1.0;
    }
    // Armijo backtracking.
    Eigen::VectorXd trial;
    double trial_loss = 0;
    bool accepted = false;
    for (int halvings = 0; halvings < 60; ++halvings) {
      trial = x - step * grad;
      trial_loss = objective.value_and_gradient(trial, trial_grad);
      if (trial_loss <= loss - 1e-4 * step * grad_sq) {
        accepted = true;
        break;
      }
      step *= 0.5;
    }
    if (!accepted) break;  // no descent possible at machine precision
    prev_x = std::move(x);
    prev_grad = std::move(grad);
    x = std::move(trial);
    grad = trial_grad;
    loss = trial_loss;
  }
  if (trace != nullptr) {
    trace->final_grad_norm = grad.norm();
    trace->converged = converged || grad.norm() < options.grad_tol;
  }
  return x;
}

LogisticRegression::LogisticRegression(Featurizer featurizer, std::vector<std::string> classes,
                                       Eigen::MatrixXd weights, Eigen::VectorXd bias)
    : FeaturizedModel(std::move(featurizer), std::move(classes)),
      weights_(std::move(weights)),
      bias_(std::move(bias)) {}

Eigen::VectorXd LogisticRegression::predict_row(const SparseVec& row) const {
  Eigen::VectorXd logits = bias_;
  for (std::size_t t = 0; t < row.index.size(); ++t) {
    if (row.index[t] < weights_.cols()) logits += weights_.col(row.index[t]) * row.value[t];
  }
  Eigen::VectorXd probs;
  softmax(logits, probs);
  return probs;
}

std::vector<std::string> LogisticRegression::gold_features() const {
  std::vector<std::string> out;
  for (Eigen::Index j = 0; j < weights_.cols(); ++j) {
    if ((weights_.col(j).array() != 0.0).any()) {
      const std::string& key = featurizer().feature_key(static_cast<int>(j));
      if (std::find(out.begin(), out.end(), key) == out.end()) out.push_back(key);
    }
  }
  return out;
}

std::shared_ptr<LogisticRegression> train_logreg(const SparseDataset& dataset,
                                                 const LogregOptions& options,
                                                 LogregTrace* trace) {
  dataset.validate();
  Featurizer featurizer = Featurizer::fit(dataset);
  std::vector<SparseVec> rows;
  std::vector<int> labels;
  for (std::size_t i : dataset.indices(Split::kTrain)) {
    rows.push_back(featurizer.transform(dataset.instances[i]));
    labels.push_back(dataset.labels[i]);
  }
  require_two_classes(labels);
  const int classes = static_cast<int>(dataset.classes.size());
  const int dim = featurizer.dim();

  LogregObjective full(rows, labels, classes, dim, options.l2);
  Eigen::VectorXd params = minimize_logreg(full, Eigen::VectorXd(), options,
                                           options.max_features ? nullptr : trace);
  if (options.max_features) {
    Eigen::MatrixXd w = Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic,
                                                       Eigen::RowMajor>>(params.data(), classes, dim);
    std::vector<int> order(dim);
    std::iota(order.begin(), order.end(), 0);
    const Eigen::VectorXd importance = w.cwiseAbs().colwise().maxCoeff().transpose();
    std::stable_sort(order.begin(), order.end(),
                     [&](int a, int b) { return importance(a) > importance(b); });
    std::vector<int> keep;
    for (int j : order) {
      if (static_cast<int>(keep.size()) >= *options.max_features || importance(j) == 0.0) break;
      keep.push_back(j);
    }
    std::sort(keep.begin(), keep.end());
    LogregObjective restricted(rows, labels, classes, dim, options.l2, keep);
    params = minimize_logreg(restricted, Eigen::VectorXd(), options, trace);
    // Disallowed weights never move from zero; clear residue explicitly.
    std::vector<char> allowed(dim, 0);
    for (int j : keep) allowed[j] = 1;
    for (int c = 0; c < classes; ++c) {
      for (int j = 0; j < dim; ++j) {
        if (!allowed[j]) params(static_cast<Eigen::Index>(c) * dim + j) = 0.0;
      }
    }
  }
  Eigen::MatrixXd weights = Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic,
                                                           Eigen::RowMajor>>(params.data(), classes, dim);
  Eigen::VectorXd bias = params.tail(classes);
  return std::make_shared<LogisticRegression>(std::move(featurizer), dataset.classes,
                                              std::move(weights), std::move(bias));
}

}  // namespace cle
