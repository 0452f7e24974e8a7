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

#include "gshap/coalition.hpp"

#include <bit>
#include <cmath>

#include "gshap/error.hpp"

namespace gshap {

namespace {

void CheckFeatureCount(std::size_t feature_count) {
  if (feature_count == 0 || feature_count > 64) {
    throw ConfigError("feature count " + std::to_string(feature_count) +
                      " outside [1, 64]");
  }
}

void CheckFeature(std::size_t feature, std::size_t feature_count) {
  if (feature >= feature_count) {
    throw ConfigError("feature index " + std::to_string(feature) +
                      " out of range for " + std::to_string(feature_count) +
                      " features");
  }
}

std::uint64_t FullMask(std::size_t feature_count) {
  return feature_count == 64 ? ~0ULL : (1ULL << feature_count) - 1;
}

}  // namespace

Coalition Coalition::Empty(std::size_t feature_count) {
  CheckFeatureCount(feature_count);
  return Coalition(0, feature_count);
}

Coalition Coalition::Full(std::size_t feature_count) {
  CheckFeatureCount(feature_count);
  return Coalition(FullMask(feature_count), feature_count);
}

Coalition Coalition::Of(std::initializer_list<std::size_t> members,
                        std::size_t feature_count) {
  CheckFeatureCount(feature_count);
  std::uint64_t mask = 0;
  for (const std::size_t m : members) {
    CheckFeature(m, feature_count);
    mask |= 1ULL << m;
  }
  return Coalition(mask, feature_count);
}

Coalition Coalition::FromMask(std::uint64_t mask, std::size_t feature_count) {
  CheckFeatureCount(feature_count);
  if (mask & ~FullMask(feature_count)) {
    throw ConfigError("coalition mask has bits beyond feature count " +
                      std::to_string(feature_count));
  }
  return Coalition(mask, feature_count);
}

Coalition Coalition::With(std::size_t feature) const {
  CheckFeature(feature, feature_count_);
  return Coalition(mask_ | (1ULL << feature), feature_count_);
}

Coalition Coalition::Without(std::size_t feature) const {
  CheckFeature(feature, feature_count_);
  return Coalition(mask_ & ~(1ULL << feature), feature_count_);
}

Coalition Coalition::Complement() const {
  return Coalition(~mask_ & FullMask(feature_count_), feature_count_);
}

std::size_t Coalition::Size() const {
  return static_cast<std::size_t>(std::popcount(mask_));
}

std::vector<std::size_t> Coalition::Members() const {
  std::vector<std::size_t> members;
  members.reserve(Size());
  for (std::size_t f = 0; f < feature_count_; ++f) {
    if (Contains(f)) members.push_back(f);
  }
  return members;
}

std::string Coalition::ToString() const {
  std::string out = "{";
  bool first = true;
  for (const std::size_t f : Members()) {
    if (!first) out += ",";
    out += std::to_string(f);
    first = false;
  }
  out += "}";
  return out;
}

double CoalitionWeight(std::size_t coalition_size, std::size_t feature_count) {
  if (feature_count == 0) {
    throw ConfigError("coalition weight needs at least one feature");
  }
  if (coalition_size + 1 > feature_count) {
    throw ConfigError("coalition size " + std::to_string(coalition_size) +
                      " too large for " + std::to_string(feature_count) +
                      " features");
  }
  // |S|! (p - |S| - 1)! / p! fits uint64 factorials through p = 20.
  if (feature_count <= 20) {
    std::uint64_t fact[21];
    fact[0] = 1;
    for (std::size_t i = 1; i <= feature_count; ++i) {
      fact[i] = fact[i - 1] * i;
    }
    return static_cast<double>(fact[coalition_size]) *
           static_cast<double>(fact[feature_count - coalition_size - 1]) /
           static_cast<double>(fact[feature_count]);
  }
  const double s = static_cast<double>(coalition_size);
  const double p = static_cast<double>(feature_count);
  return std::exp(std::lgamma(s + 1) + std::lgamma(p - s) -
                  std::lgamma(p + 1));
}

void HybridComposeRow(std::span<const double> sample_row,
                      std::span<const double> background_row,
                      const Coalition& coalition, std::vector<double>& out) {
  const std::size_t p = coalition.FeatureCount();
  if (sample_row.size() != p || background_row.size() != p) {
    throw DataError("row width does not match coalition feature count " +
                    std::to_string(p));
  }
  out.resize(p);
  for (std::size_t j = 0; j < p; ++j) {
    out[j] = coalition.Contains(j) ? sample_row[j] : background_row[j];
  }
}

FeatureMatrix HybridCompose(const FeatureMatrix& sample,
                            const FeatureMatrix& background,
                            const Coalition& coalition) {
  if (!sample.SameShapeAndNames(background)) {
    throw DataError("sample and background disagree in shape or columns");
  }
  if (sample.Cols() != coalition.FeatureCount()) {
    throw DataError("matrix width " + std::to_string(sample.Cols()) +
                    " does not match coalition feature count " +
                    std::to_string(coalition.FeatureCount()));
  }
  std::vector<double> values;
  values.reserve(sample.Rows() * sample.Cols());
  std::vector<double> row;
  for (std::size_t r = 0; r < sample.Rows(); ++r) {
    HybridComposeRow(sample.Row(r), background.Row(r), coalition, row);
    values.insert(values.end(), row.begin(), row.end());
  }
  return FeatureMatrix::WithSameSchema(sample, std::move(values),
                                       sample.Rows());
}

}  // namespace gshap
