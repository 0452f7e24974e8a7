/*
 * Copyright 2026 The gshap authors.
 *
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

#include "gshap/knn.hpp"

#include <algorithm>
#include <map>
#include <numeric>

#include "gshap/error.hpp"

namespace gshap {

namespace {

void CheckK(std::size_t k, std::size_t n_train) {
  if (k == 0) throw ConfigError("k must be at least 1");
  if (k > n_train) {
    throw ConfigError("k = " + std::to_string(k) + " exceeds " +
                      std::to_string(n_train) + " training rows");
  }
}

double SquaredDistance(std::span<const double> a, std::span<const double> b) {
  double sum = 0.0;
  for (std::size_t j = 0; j < a.size(); ++j) {
    const double d = a[j] - b[j];
    sum += d * d;
  }
  return sum;
}

bool LexLess(std::span<const double> a, std::span<const double> b) {
  return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
}

// The k nearest training rows for one query, ordered by (distance,
// tie_key, feature vector). Value-based tie keys make the neighbor set a
// function of the training data as a multiset, not of its row order.
template <typename TieKey>
std::vector<std::size_t> Neighbors(const FeatureMatrix& train,
                                   std::span<const double> query,
                                   std::size_t k, const TieKey& tie_key) {
  std::vector<double> distance(train.Rows());
  for (std::size_t i = 0; i < train.Rows(); ++i) {
    distance[i] = SquaredDistance(query, train.Row(i));
  }
  std::vector<std::size_t> order(train.Rows());
  std::iota(order.begin(), order.end(), 0);
  const auto before = [&](std::size_t a, std::size_t b) {
    if (distance[a] != distance[b]) return distance[a] < distance[b];
    if (tie_key(a) != tie_key(b)) return tie_key(a) < tie_key(b);
    return LexLess(train.Row(a), train.Row(b));
  };
  std::partial_sort(order.begin(), order.begin() + k, order.end(), before);
  order.resize(k);
  return order;
}

}  // namespace

KnnClassifier::KnnClassifier(const FeatureMatrix& train_features,
                             std::vector<std::string> train_labels,
                             std::size_t k)
    : standardized_(train_features), k_(k) {
  CheckK(k, train_features.Rows());
  if (train_labels.size() != train_features.Rows()) {
    throw DataError("label count " + std::to_string(train_labels.size()) +
                    " does not match " + std::to_string(train_features.Rows()) +
                    " training rows");
  }
  std::map<std::string, std::size_t> id_of;
  for (const std::string& label : train_labels) {
    id_of.emplace(label, 0);
  }
  if (id_of.size() < 2) {
    throw ConfigError("classifier needs at least two classes, got " +
                      std::to_string(id_of.size()));
  }
  class_names_.reserve(id_of.size());
  for (auto& [name, id] : id_of) {
    id = class_names_.size();
    class_names_.push_back(name);
  }
  label_ids_.reserve(train_labels.size());
  for (const std::string& label : train_labels) {
    label_ids_.push_back(id_of[label]);
  }
  standardizer_ = Standardizer::Fit(train_features);
  standardized_ = standardizer_.Transform(train_features);
}

ModelOutput KnnClassifier::Predict(const FeatureMatrix& features) const {
  if (features.Cols() != standardized_.Cols()) {
    throw DataError("query has " + std::to_string(features.Cols()) +
                    " columns, model was fit on " +
                    std::to_string(standardized_.Cols()));
  }
  const FeatureMatrix queries = standardizer_.Transform(features);
  const std::size_t classes = class_names_.size();
  std::vector<double> probs(features.Rows() * classes, 0.0);
  // Class id doubles as the distance tie key: ids follow the sorted class
  // names, so the key is a pure function of the row's label value.
  const auto tie_key = [&](std::size_t row) { return label_ids_[row]; };
  for (std::size_t r = 0; r < queries.Rows(); ++r) {
    const std::vector<std::size_t> nearest =
        Neighbors(standardized_, queries.Row(r), k_, tie_key);
    for (const std::size_t i : nearest) {
      probs[r * classes + label_ids_[i]] += 1.0;
    }
    for (std::size_t c = 0; c < classes; ++c) {
      probs[r * classes + c] /= static_cast<double>(k_);
    }
  }
  return ModelOutput::Probabilities(std::move(probs), features.Rows(),
                                    class_names_);
}

KnnRegressor::KnnRegressor(const FeatureMatrix& train_features,
                           std::vector<double> train_targets, std::size_t k,
                           bool standardize)
    : standardized_(train_features), targets_(std::move(train_targets)),
      k_(k) {
  CheckK(k, train_features.Rows());
  if (targets_.size() != train_features.Rows()) {
    throw DataError("target count " + std::to_string(targets_.size()) +
                    " does not match " + std::to_string(train_features.Rows()) +
                    " training rows");
  }
  if (standardize) {
    standardizer_ = Standardizer::Fit(train_features);
    standardized_ = standardizer_.Transform(train_features);
  }
}

ModelOutput KnnRegressor::Predict(const FeatureMatrix& features) const {
  if (features.Cols() != standardized_.Cols()) {
    throw DataError("query has " + std::to_string(features.Cols()) +
                    " columns, model was fit on " +
                    std::to_string(standardized_.Cols()));
  }
  const FeatureMatrix queries = standardizer_.Means().empty()
                                    ? features
                                    : standardizer_.Transform(features);
  std::vector<double> out(features.Rows());
  const auto tie_key = [&](std::size_t row) { return targets_[row]; };
  for (std::size_t r = 0; r < queries.Rows(); ++r) {
    const std::vector<std::size_t> nearest =
        Neighbors(standardized_, queries.Row(r), k_, tie_key);
    double sum = 0.0;
    for (const std::size_t i : nearest) sum += targets_[i];
    out[r] = sum / static_cast<double>(k_);
  }
  return ModelOutput::Scalars(std::move(out));
}

}  // namespace gshap
