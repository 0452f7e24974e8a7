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

#ifndef GSHAP_KNN_HPP_
#define GSHAP_KNN_HPP_

#include <cstddef>
#include <string>
#include <vector>

#include "gshap/ingest.hpp"
#include "gshap/matrix.hpp"
#include "gshap/model.hpp"

namespace gshap {

// k-nearest-neighbor classifier over standardized Euclidean distance.
// Probabilities are the vote fractions of the k nearest training rows.
// Neighbor order breaks distance ties by (label, feature vector lexico-
// graphically), so predictions do not depend on training-row order.
class KnnClassifier : public BlackBoxModel {
 public:
  KnnClassifier(const FeatureMatrix& train_features,
                std::vector<std::string> train_labels, std::size_t k);

  ModelOutput Predict(const FeatureMatrix& features) const override;

  const std::vector<std::string>& ClassNames() const { return class_names_; }

 private:
  FeatureMatrix standardized_;
  Standardizer standardizer_;
  std::vector<std::size_t> label_ids_;  // index into class_names_ per row
  std::vector<std::string> class_names_;
  std::size_t k_;
};

// k-nearest-neighbor regressor: mean target of the k nearest training
// rows, same distance and tie rules as the classifier with the numeric
// target in the label role. standardize=false measures distance on the
// raw coordinates; the PCA pipeline uses that, since its inputs are
// already variance-ordered component scores.
class KnnRegressor : public BlackBoxModel {
 public:
  KnnRegressor(const FeatureMatrix& train_features,
               std::vector<double> train_targets, std::size_t k,
               bool standardize = true);

  ModelOutput Predict(const FeatureMatrix& features) const override;

 private:
  FeatureMatrix standardized_;
  Standardizer standardizer_;
  std::vector<double> targets_;
  std::size_t k_;
};

}  // namespace gshap

#endif  // GSHAP_KNN_HPP_
