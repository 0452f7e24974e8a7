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

#ifndef GSHAP_PCA_HPP_
#define GSHAP_PCA_HPP_

#include <cstddef>
#include <memory>
#include <vector>

#include "gshap/ingest.hpp"
#include "gshap/matrix.hpp"
#include "gshap/model.hpp"

namespace gshap {

// Principal-component projection fit on standardized training features.
// Components are the top eigenvectors of the covariance matrix, ordered by
// descending eigenvalue. Each component's sign is fixed so its largest-
// magnitude loading is positive, which makes the projection reproducible
// across eigensolver implementations.
class PcaProjection {
 public:
  PcaProjection(const FeatureMatrix& train_features, std::size_t components);

  // Rows projected into component space; columns named "pc0", "pc1", ...
  FeatureMatrix Transform(const FeatureMatrix& features) const;

  std::size_t Components() const { return components_; }
  const std::vector<double>& Eigenvalues() const { return eigenvalues_; }

  // Loading of input feature `feature` on component `component`.
  double Loading(std::size_t component, std::size_t feature) const;

 private:
  Standardizer standardizer_;
  std::vector<double> loadings_;  // components_ x input width, row-major
  std::vector<double> eigenvalues_;
  std::size_t components_ = 0;
  std::size_t input_width_ = 0;
};

// Dimensionality-reducing regressor: PCA projection of the inputs followed
// by k-nearest-neighbor regression in component space. Explanations still
// run over the original feature columns; the projection is internal.
class PcaKnnRegressor : public BlackBoxModel {
 public:
  PcaKnnRegressor(const FeatureMatrix& train_features,
                  std::vector<double> train_targets, std::size_t components,
                  std::size_t k);

  ModelOutput Predict(const FeatureMatrix& features) const override;

  const PcaProjection& Projection() const { return projection_; }

 private:
  PcaProjection projection_;
  // KnnRegressor is held by pointer to keep this header free of its type.
  std::shared_ptr<const BlackBoxModel> knn_;
};

}  // namespace gshap

#endif  // GSHAP_PCA_HPP_
