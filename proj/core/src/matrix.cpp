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

#include "gshap/matrix.hpp"

#include <cmath>
#include <unordered_set>

#include "gshap/error.hpp"

namespace gshap {

namespace {

void CheckValuesFinite(const std::vector<double>& values, std::size_t rows,
                       std::size_t cols) {
  if (rows == 0) throw DataError("feature matrix has no rows");
  if (cols == 0) throw DataError("feature matrix has no columns");
  if (values.size() != rows * cols) {
    throw DataError("feature matrix value count " +
                    std::to_string(values.size()) + " does not match " +
                    std::to_string(rows) + "x" + std::to_string(cols));
  }
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (!std::isfinite(values[i])) {
      throw DataError("non-finite value at row " + std::to_string(i / cols) +
                      ", column " + std::to_string(i % cols));
    }
  }
}

void CheckNames(const std::vector<std::string>& names) {
  std::unordered_set<std::string> seen;
  for (const std::string& name : names) {
    if (name.empty()) throw DataError("empty column name");
    if (!seen.insert(name).second) {
      throw DataError("duplicate column name \"" + name + "\"");
    }
  }
}

}  // namespace

FeatureMatrix::FeatureMatrix(std::vector<double> values, std::size_t rows,
                             std::vector<std::string> column_names) {
  CheckNames(column_names);
  CheckValuesFinite(values, rows, column_names.size());
  values_ = std::move(values);
  rows_ = rows;
  cols_ = column_names.size();
  names_ = std::make_shared<const std::vector<std::string>>(
      std::move(column_names));
}

FeatureMatrix::FeatureMatrix(
    std::vector<double> values, std::size_t rows, std::size_t cols,
    std::shared_ptr<const std::vector<std::string>> names)
    : values_(std::move(values)), rows_(rows), cols_(cols),
      names_(std::move(names)) {}

FeatureMatrix FeatureMatrix::WithSameSchema(const FeatureMatrix& like,
                                            std::vector<double> values,
                                            std::size_t rows) {
  CheckValuesFinite(values, rows, like.cols_);
  return FeatureMatrix(std::move(values), rows, like.cols_, like.names_);
}

std::vector<double> FeatureMatrix::Column(std::size_t col) const {
  std::vector<double> out(rows_);
  for (std::size_t r = 0; r < rows_; ++r) out[r] = At(r, col);
  return out;
}

FeatureMatrix FeatureMatrix::SelectRows(
    const std::vector<std::size_t>& rows) const {
  if (rows.empty()) throw DataError("row selection is empty");
  std::vector<double> values;
  values.reserve(rows.size() * cols_);
  for (const std::size_t r : rows) {
    if (r >= rows_) {
      throw DataError("row index " + std::to_string(r) + " out of range");
    }
    const auto row = Row(r);
    values.insert(values.end(), row.begin(), row.end());
  }
  return FeatureMatrix(std::move(values), rows.size(), cols_, names_);
}

bool FeatureMatrix::SameShapeAndNames(const FeatureMatrix& other) const {
  return rows_ == other.rows_ && cols_ == other.cols_ &&
         (names_ == other.names_ || *names_ == *other.names_);
}

}  // namespace gshap
