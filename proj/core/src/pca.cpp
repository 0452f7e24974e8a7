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

#include "gshap/pca.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Dense>

#include "gshap/error.hpp"
#include "gshap/knn.hpp"

namespace gshap {

PcaProjection::PcaProjection(const FeatureMatrix& train_features,
                             std::size_t components)
    : components_(components), input_width_(train_features.Cols()) {
  const std::size_t n = train_features.Rows();
  const std::size_t p = train_features.Cols();
  if (components == 0) {
    throw ConfigError("component count must be at least 1");
  }
  const std::size_t limit = std::min(n - 1, p);
  if (n < 2 || components > limit) {
    throw ConfigError("component count " + std::to_string(components) +
                      " exceeds min(n-1, p) = " +
                      std::to_string(n < 2 ? 0 : limit));
  }

  standardizer_ = Standardizer::Fit(train_features);
  const FeatureMatrix standardized = standardizer_.Transform(train_features);

  Eigen::MatrixXd x(n, p);
  for (std::size_t r = 0; r < n; ++r) {
    for (std::size_t c = 0; c < p; ++c) {
      x(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) =
          standardized.At(r, c);
    }
  }
  // Columns are centered by the standardizer, so X'X/n is the covariance.
  const Eigen::MatrixXd covariance =
      (x.transpose() * x) / static_cast<double>(n);

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(covariance);
  if (solver.info() != Eigen::Success) {
    throw ComputeError("eigendecomposition of the covariance failed");
  }
  const Eigen::VectorXd eigenvalues = solver.eigenvalues();  // ascending
  const Eigen::MatrixXd eigenvectors = solver.eigenvectors();

  const double max_eigenvalue = eigenvalues(static_cast<Eigen::Index>(p - 1));
  std::size_t rank = 0;
  for (std::size_t i = 0; i < p; ++i) {
    if (eigenvalues(static_cast<Eigen::Index>(i)) >
        std::max(max_eigenvalue, 0.0) * 1e-12) {
      ++rank;
    }
  }
  if (components > rank) {
    throw ConfigError("component count " + std::to_string(components) +
                      " exceeds covariance rank " + std::to_string(rank));
  }

  loadings_.assign(components * p, 0.0);
  eigenvalues_.assign(components, 0.0);
  for (std::size_t k = 0; k < components; ++k) {
    const Eigen::Index col = static_cast<Eigen::Index>(p - 1 - k);
    eigenvalues_[k] = eigenvalues(col);
    std::size_t pivot = 0;
    double pivot_abs = -1.0;
    for (std::size_t j = 0; j < p; ++j) {
      const double a = std::abs(eigenvectors(static_cast<Eigen::Index>(j), col));
      if (a > pivot_abs) {
        pivot_abs = a;
        pivot = j;
      }
    }
    const double sign =
        eigenvectors(static_cast<Eigen::Index>(pivot), col) < 0.0 ? -1.0 : 1.0;
    for (std::size_t j = 0; j < p; ++j) {
      loadings_[k * p + j] =
          sign * eigenvectors(static_cast<Eigen::Index>(j), col);
    }
  }
}

FeatureMatrix PcaProjection::Transform(const FeatureMatrix& features) const {
  if (features.Cols() != input_width_) {
    throw DataError("projection fit on " + std::to_string(input_width_) +
                    " columns, applied to " + std::to_string(features.Cols()));
  }
  const FeatureMatrix standardized = standardizer_.Transform(features);
  std::vector<double> values(features.Rows() * components_);
  for (std::size_t r = 0; r < features.Rows(); ++r) {
    const auto row = standardized.Row(r);
    for (std::size_t k = 0; k < components_; ++k) {
      double dot = 0.0;
      for (std::size_t j = 0; j < input_width_; ++j) {
        dot += loadings_[k * input_width_ + j] * row[j];
      }
      values[r * components_ + k] = dot;
    }
  }
  std::vector<std::string> names(components_);
  for (std::size_t k = 0; k < components_; ++k) {
    names[k] = "pc" + std::to_string(k);
  }
  return FeatureMatrix(std::move(values), features.Rows(), std::move(names));
}

double PcaProjection::Loading(std::size_t component,
                              std::size_t feature) const {
  if (component >= components_ || feature >= input_width_) {
    throw ConfigError("loading index out of range");
  }
  return loadings_[component * input_width_ + feature];
}

PcaKnnRegressor::PcaKnnRegressor(const FeatureMatrix& train_features,
                                 std::vector<double> train_targets,
                                 std::size_t components, std::size_t k)
    : projection_(train_features, components) {
  knn_ = std::make_shared<KnnRegressor>(projection_.Transform(train_features),
                                        std::move(train_targets), k,
                                        /*standardize=*/false);
}

ModelOutput PcaKnnRegressor::Predict(const FeatureMatrix& features) const {
  return knn_->Predict(projection_.Transform(features));
}

}  // namespace gshap
