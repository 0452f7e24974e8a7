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

#ifndef GSHAP_LOGISTIC_HPP_
#define GSHAP_LOGISTIC_HPP_

#include <cstddef>
#include <string>
#include <vector>

#include "gshap/ingest.hpp"
#include "gshap/matrix.hpp"
#include "gshap/model.hpp"

namespace gshap {

struct LogisticConfig {
  std::size_t epochs = 500;
  double learning_rate = 0.1;
};

// Binary logistic regression trained by full-batch gradient descent on
// standardized features. The two class names are the sorted distinct
// labels; class 1 is the greater. Training is deterministic (zero init,
// fixed epoch count), and the per-epoch mean negative log likelihood is
// recorded for inspection.
class LogisticClassifier : public BlackBoxModel {
 public:
  LogisticClassifier(const FeatureMatrix& train_features,
                     const std::vector<std::string>& train_labels,
                     const LogisticConfig& config);

  ModelOutput Predict(const FeatureMatrix& features) const override;

  const std::vector<std::string>& ClassNames() const { return class_names_; }
  const std::vector<double>& LossHistory() const { return loss_history_; }
  const std::vector<double>& Weights() const { return weights_; }
  double Bias() const { return bias_; }

 private:
  Standardizer standardizer_;
  std::vector<double> weights_;
  double bias_ = 0.0;
  std::vector<std::string> class_names_;
  std::vector<double> loss_history_;
};

// Mean negative log likelihood of (weights, bias) on standardized features
// with 0/1 targets. Exposed so tests can check the trained loss against a
// finite-difference gradient.
double LogisticNll(const FeatureMatrix& features,
                   const std::vector<int>& targets,
                   const std::vector<double>& weights, double bias);

void LogisticNllGradient(const FeatureMatrix& features,
                         const std::vector<int>& targets,
                         const std::vector<double>& weights, double bias,
                         std::vector<double>& grad_weights, double& grad_bias);

}  // namespace gshap

#endif  // GSHAP_LOGISTIC_HPP_
