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

#ifndef GSHAP_MATRIX_HPP_
#define GSHAP_MATRIX_HPP_

#include <cstddef>
#include <memory>
#include <span>
#include <string>
#include <vector>

namespace gshap {

// Dense row-major matrix of feature values with named columns.
// Invariants, checked at construction:
//   - at least one row and one column
//   - values.size() == rows * cols
//   - every value is finite
//   - column names are nonempty and unique
class FeatureMatrix {
 public:
  FeatureMatrix(std::vector<double> values, std::size_t rows,
                std::vector<std::string> column_names);

  // Builds a matrix sharing the column-name table of `like`. Skips the
  // name-validation pass; values are still checked.
  static FeatureMatrix WithSameSchema(const FeatureMatrix& like,
                                      std::vector<double> values,
                                      std::size_t rows);

  std::size_t Rows() const { return rows_; }
  std::size_t Cols() const { return cols_; }

  double At(std::size_t row, std::size_t col) const {
    return values_[row * cols_ + col];
  }

  std::span<const double> Row(std::size_t row) const {
    return std::span<const double>(values_.data() + row * cols_, cols_);
  }

  const std::vector<double>& Values() const { return values_; }
  const std::vector<std::string>& ColumnNames() const { return *names_; }

  std::vector<double> Column(std::size_t col) const;

  FeatureMatrix SelectRows(const std::vector<std::size_t>& rows) const;

  bool SameShapeAndNames(const FeatureMatrix& other) const;

 private:
  FeatureMatrix(std::vector<double> values, std::size_t rows, std::size_t cols,
                std::shared_ptr<const std::vector<std::string>> names);

  std::vector<double> values_;
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::shared_ptr<const std::vector<std::string>> names_;
};

}  // namespace gshap

#endif  // GSHAP_MATRIX_HPP_
