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

#include "gshap/logistic.hpp"

#include <cmath>
#include <set>

#include "gshap/error.hpp"

namespace gshap {

namespace {

double Sigmoid(double z) { return 1.0 / (1.0 + std::exp(-z)); }

double RowLogit(const FeatureMatrix& features, std::size_t row,
                const std::vector<double>& weights, double bias) {
  double z = bias;
  const auto r = features.Row(row);
  for (std::size_t j = 0; j < weights.size(); ++j) z += weights[j] * r[j];
  return z;
}

}  // namespace

double LogisticNll(const FeatureMatrix& features,
                   const std::vector<int>& targets,
                   const std::vector<double>& weights, double bias) {
  double total = 0.0;
  for (std::size_t r = 0; r < features.Rows(); ++r) {
    const double z = RowLogit(features, r, weights, bias);
    // log(1 + exp(z)) - y z, in the overflow-free split form.
    total += std::max(z, 0.0) + std::log1p(std::exp(-std::abs(z))) -
             static_cast<double>(targets[r]) * z;
  }
  return total / static_cast<double>(features.Rows());
}

void LogisticNllGradient(const FeatureMatrix& features,
                         const std::vector<int>& targets,
                         const std::vector<double>& weights, double bias,
                         std::vector<double>& grad_weights, double& grad_bias) {
  const std::size_t n = features.Rows();
  grad_weights.assign(weights.size(), 0.0);
  grad_bias = 0.0;
  for (std::size_t r = 0; r < n; ++r) {
    const double residual =
        Sigmoid(RowLogit(features, r, weights, bias)) -
        static_cast<double>(targets[r]);
    const auto row = features.Row(r);
    for (std::size_t j = 0; j < weights.size(); ++j) {
      grad_weights[j] += residual * row[j];
    }
    grad_bias += residual;
  }
  for (double& g : grad_weights) g /= static_cast<double>(n);
  grad_bias /= static_cast<double>(n);
}

LogisticClassifier::LogisticClassifier(const FeatureMatrix& train_features,
                                       const std::vector<std::string>& train_labels,
                                       const LogisticConfig& config)
    : weights_(train_features.Cols(), 0.0) {
  if (train_labels.size() != train_features.Rows()) {
    throw DataError("label count " + std::to_string(train_labels.size()) +
                    " does not match " + std::to_string(train_features.Rows()) +
                    " training rows");
  }
  const std::set<std::string> distinct(train_labels.begin(),
                                       train_labels.end());
  if (distinct.size() != 2) {
    throw ConfigError("logistic classifier needs exactly two classes, got " +
                      std::to_string(distinct.size()));
  }
  class_names_.assign(distinct.begin(), distinct.end());

  std::vector<int> targets(train_labels.size());
  for (std::size_t r = 0; r < train_labels.size(); ++r) {
    targets[r] = train_labels[r] == class_names_[1] ? 1 : 0;
  }

  standardizer_ = Standardizer::Fit(train_features);
  const FeatureMatrix standardized = standardizer_.Transform(train_features);

  loss_history_.reserve(config.epochs);
  std::vector<double> grad(weights_.size());
  double grad_bias = 0.0;
  for (std::size_t epoch = 0; epoch < config.epochs; ++epoch) {
    LogisticNllGradient(standardized, targets, weights_, bias_, grad,
                        grad_bias);
    for (std::size_t j = 0; j < weights_.size(); ++j) {
      weights_[j] -= config.learning_rate * grad[j];
    }
    bias_ -= config.learning_rate * grad_bias;
    loss_history_.push_back(LogisticNll(standardized, targets, weights_,
                                        bias_));
  }
}

ModelOutput LogisticClassifier::Predict(const FeatureMatrix& features) const {
  if (features.Cols() != weights_.size()) {
    throw DataError("query has " + std::to_string(features.Cols()) +
                    " columns, model was fit on " +
                    std::to_string(weights_.size()));
  }
  const FeatureMatrix standardized = standardizer_.Transform(features);
  std::vector<double> probs(features.Rows() * 2);
  for (std::size_t r = 0; r < standardized.Rows(); ++r) {
    const double p1 = Sigmoid(RowLogit(standardized, r, weights_, bias_));
    probs[r * 2] = 1.0 - p1;
    probs[r * 2 + 1] = p1;
  }
  return ModelOutput::Probabilities(std::move(probs), features.Rows(),
                                    class_names_);
}

}  // namespace gshap
