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

#include "gshap/model.hpp"

#include <cmath>
#include <unordered_set>

#include "gshap/error.hpp"

namespace gshap {

ModelOutput ModelOutput::Scalars(std::vector<double> values) {
  if (values.empty()) throw ComputeError("model returned no outputs");
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (!std::isfinite(values[i])) {
      throw ComputeError("model output for row " + std::to_string(i) +
                         " is not finite");
    }
  }
  ModelOutput out;
  out.rows_ = values.size();
  out.values_ = std::move(values);
  return out;
}

ModelOutput ModelOutput::Probabilities(std::vector<double> values,
                                       std::size_t rows,
                                       std::vector<std::string> class_names) {
  if (rows == 0) throw ComputeError("model returned no outputs");
  if (class_names.size() < 2) {
    throw ComputeError("probabilistic output needs at least two classes");
  }
  if (values.size() != rows * class_names.size()) {
    throw ComputeError("probability value count " +
                       std::to_string(values.size()) + " does not match " +
                       std::to_string(rows) + " rows x " +
                       std::to_string(class_names.size()) + " classes");
  }
  {
    std::unordered_set<std::string> seen;
    for (const std::string& name : class_names) {
      if (name.empty()) throw ComputeError("empty class name");
      if (!seen.insert(name).second) {
        throw ComputeError("duplicate class name \"" + name + "\"");
      }
    }
  }
  const std::size_t classes = class_names.size();
  for (std::size_t r = 0; r < rows; ++r) {
    double sum = 0.0;
    for (std::size_t c = 0; c < classes; ++c) {
      const double v = values[r * classes + c];
      if (!std::isfinite(v) || v < 0.0) {
        throw ComputeError("probability for row " + std::to_string(r) +
                           ", class \"" + class_names[c] + "\" is invalid");
      }
      sum += v;
    }
    if (std::abs(sum - 1.0) > 1e-9) {
      throw ComputeError("probabilities for row " + std::to_string(r) +
                         " sum to " + std::to_string(sum) + ", expected 1");
    }
  }
  ModelOutput out;
  out.rows_ = rows;
  out.classes_ = classes;
  out.values_ = std::move(values);
  out.class_names_ = std::move(class_names);
  return out;
}

std::size_t ModelOutput::ClassIndex(const std::string& name) const {
  if (!IsProbabilistic()) {
    throw ConfigError("class \"" + name +
                      "\" requested from a scalar model output");
  }
  for (std::size_t c = 0; c < class_names_.size(); ++c) {
    if (class_names_[c] == name) return c;
  }
  throw ConfigError("unknown class \"" + name + "\"");
}

std::size_t ModelOutput::ArgmaxClass(std::size_t row) const {
  std::size_t best = 0;
  double best_value = Probability(row, 0);
  for (std::size_t c = 1; c < classes_; ++c) {
    const double v = Probability(row, c);
    if (v > best_value) {
      best = c;
      best_value = v;
    }
  }
  return best;
}

}  // namespace gshap
