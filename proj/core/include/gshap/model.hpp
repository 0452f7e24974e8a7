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

#ifndef GSHAP_MODEL_HPP_
#define GSHAP_MODEL_HPP_

#include <cstddef>
#include <string>
#include <vector>

#include "gshap/matrix.hpp"

namespace gshap {

// Prediction batch returned by a model: either one scalar per row, or one
// probability vector per row over a fixed ordered class list. Probability
// rows must be nonnegative and sum to 1 within 1e-9.
class ModelOutput {
 public:
  static ModelOutput Scalars(std::vector<double> values);
  static ModelOutput Probabilities(std::vector<double> values,
                                   std::size_t rows,
                                   std::vector<std::string> class_names);

  bool IsProbabilistic() const { return classes_ > 0; }
  std::size_t Rows() const { return rows_; }
  std::size_t Classes() const { return classes_; }

  double Scalar(std::size_t row) const { return values_[row]; }

  double Probability(std::size_t row, std::size_t cls) const {
    return values_[row * classes_ + cls];
  }

  const std::vector<std::string>& ClassNames() const { return class_names_; }

  // Index of `name` in the class list; ConfigError if absent or if the
  // output is scalar.
  std::size_t ClassIndex(const std::string& name) const;

  // Highest-probability class for a row; ties resolve to the lowest index.
  std::size_t ArgmaxClass(std::size_t row) const;

 private:
  ModelOutput() = default;

  std::vector<double> values_;
  std::vector<std::string> class_names_;
  std::size_t rows_ = 0;
  std::size_t classes_ = 0;  // 0 marks scalar output
};

// Interface the attribution engines drive. Implementations map a batch of
// feature rows to one output per row and must be deterministic: equal
// input matrices give equal outputs, including across processes.
class BlackBoxModel {
 public:
  virtual ~BlackBoxModel() = default;

  virtual ModelOutput Predict(const FeatureMatrix& features) const = 0;

  // True when Predict may run from several threads at once. The engines
  // fall back to sequential evaluation when this is false.
  virtual bool ConcurrentSafe() const { return true; }
};

}  // namespace gshap

#endif  // GSHAP_MODEL_HPP_
