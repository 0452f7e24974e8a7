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

#ifndef GSHAP_TESTS_TEST_UTIL_HPP_
#define GSHAP_TESTS_TEST_UTIL_HPP_

#include <bit>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "gshap/matrix.hpp"
#include "gshap/model.hpp"
#include "gshap/rng.hpp"

namespace gshap::testutil {

// Uniform double in [0, 1) from the generator's raw 64-bit output, so the
// draw sequence does not depend on the standard library's distribution
// implementations.
inline double UniformReal(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

inline double UniformIn(std::mt19937_64& rng, double lo, double hi) {
  return lo + (hi - lo) * UniformReal(rng);
}

// Standard normal via Box-Muller on two uniform draws.
inline double Normal(std::mt19937_64& rng) {
  const double u = 1.0 - UniformReal(rng);
  const double v = UniformReal(rng);
  return std::sqrt(-2.0 * std::log(u)) * std::cos(6.283185307179586 * v);
}

inline std::vector<std::string> ColumnNames(std::size_t cols,
                                            const std::string& prefix = "x") {
  std::vector<std::string> names(cols);
  for (std::size_t c = 0; c < cols; ++c) names[c] = prefix + std::to_string(c);
  return names;
}

inline FeatureMatrix MakeMatrix(const std::vector<std::vector<double>>& rows,
                                std::vector<std::string> names = {}) {
  const std::size_t cols = rows.at(0).size();
  std::vector<double> values;
  values.reserve(rows.size() * cols);
  for (const auto& row : rows) {
    for (double v : row) values.push_back(v);
  }
  if (names.empty()) names = ColumnNames(cols);
  return FeatureMatrix(std::move(values), rows.size(), std::move(names));
}

inline FeatureMatrix RandomMatrix(std::uint64_t seed, std::size_t rows,
                                  std::size_t cols, double lo = -1.0,
                                  double hi = 1.0) {
  std::mt19937_64 rng = SubStream(seed, 0);
  std::vector<double> values(rows * cols);
  for (double& v : values) v = UniformIn(rng, lo, hi);
  return FeatureMatrix(std::move(values), rows, ColumnNames(cols));
}

// Scalar model defined by an arbitrary per-row function.
class LambdaModel : public BlackBoxModel {
 public:
  using Fn = std::function<double(std::span<const double>)>;
  explicit LambdaModel(Fn fn, bool concurrent_safe = true)
      : fn_(std::move(fn)), concurrent_safe_(concurrent_safe) {}

  ModelOutput Predict(const FeatureMatrix& features) const override {
    std::vector<double> out(features.Rows());
    for (std::size_t r = 0; r < features.Rows(); ++r) {
      out[r] = fn_(features.Row(r));
    }
    return ModelOutput::Scalars(std::move(out));
  }
  bool ConcurrentSafe() const override { return concurrent_safe_; }

 private:
  Fn fn_;
  bool concurrent_safe_;
};

// Probabilistic model defined by a per-row probability-vector function.
class ProbLambdaModel : public BlackBoxModel {
 public:
  using Fn = std::function<std::vector<double>(std::span<const double>)>;
  ProbLambdaModel(std::vector<std::string> class_names, Fn fn)
      : class_names_(std::move(class_names)), fn_(std::move(fn)) {}

  ModelOutput Predict(const FeatureMatrix& features) const override {
    std::vector<double> values;
    values.reserve(features.Rows() * class_names_.size());
    for (std::size_t r = 0; r < features.Rows(); ++r) {
      const std::vector<double> row = fn_(features.Row(r));
      values.insert(values.end(), row.begin(), row.end());
    }
    return ModelOutput::Probabilities(std::move(values), features.Rows(),
                                      class_names_);
  }

 private:
  std::vector<std::string> class_names_;
  Fn fn_;
};

inline LambdaModel LinearModel(std::vector<double> weights, double bias = 0.0) {
  return LambdaModel([weights = std::move(weights),
                      bias](std::span<const double> row) {
    double z = bias;
    for (std::size_t j = 0; j < row.size(); ++j) z += weights[j] * row[j];
    return z;
  });
}

inline LambdaModel ProductModel() {
  return LambdaModel([](std::span<const double> row) {
    double z = 1.0;
    for (double v : row) z *= v;
    return z;
  });
}

inline LambdaModel ConstantModel(double value) {
  return LambdaModel([value](std::span<const double>) { return value; });
}

// Probabilities read straight off the feature row, renormalized to sum to
// one. Lets a test drive classification_g with hand-chosen probabilities
// that remain valid under background imputation (all entries positive).
inline ProbLambdaModel RowProbModel(std::size_t classes) {
  std::vector<std::string> names(classes);
  for (std::size_t c = 0; c < classes; ++c) names[c] = "c" + std::to_string(c);
  return ProbLambdaModel(std::move(names),
                         [classes](std::span<const double> row) {
                           double total = 0.0;
                           for (std::size_t c = 0; c < classes; ++c) {
                             total += row[c];
                           }
                           std::vector<double> probs(classes);
                           for (std::size_t c = 0; c < classes; ++c) {
                             probs[c] = row[c] / total;
                           }
                           return probs;
                         });
}

inline double FactorialAsDouble(std::size_t n) {
  double f = 1.0;
  for (std::size_t i = 2; i <= n; ++i) f *= static_cast<double>(i);
  return f;
}

// Straight transcription of the classic single-observation Shapley sum:
// for every subset S of the other features, weight the value difference of
// adding feature j. The induced value function imputes the complement of S
// from each of the first min(|Z|, cap) background rows in turn and
// averages, which is the same set function the exact engine induces for a
// one-row sample. Shares only the matrix container with the library; the
// subset walk, weights, and imputation are written independently so the
// two implementations can check each other.
inline std::vector<double> DirectShapleySingleRow(
    const BlackBoxModel& model, std::span<const double> x,
    const FeatureMatrix& background,
    const std::optional<std::string>& designated = {},
    std::size_t cap = 64) {
  const std::size_t p = x.size();
  const std::size_t draws = background.Rows() < cap ? background.Rows() : cap;

  const auto value_of = [&](std::uint64_t mask) {
    double total = 0.0;
    for (std::size_t t = 0; t < draws; ++t) {
      std::vector<double> hybrid(p);
      for (std::size_t j = 0; j < p; ++j) {
        hybrid[j] = ((mask >> j) & 1ULL) ? x[j] : background.At(t, j);
      }
      const FeatureMatrix one =
          FeatureMatrix::WithSameSchema(background, std::move(hybrid), 1);
      const ModelOutput out = model.Predict(one);
      total += out.IsProbabilistic()
                   ? out.Probability(0, out.ClassIndex(*designated))
                   : out.Scalar(0);
    }
    return total / static_cast<double>(draws);
  };

  std::vector<double> phi(p, 0.0);
  const double p_factorial = FactorialAsDouble(p);
  for (std::size_t j = 0; j < p; ++j) {
    for (std::uint64_t mask = 0; mask < (1ULL << p); ++mask) {
      if ((mask >> j) & 1ULL) continue;
      const std::size_t s =
          static_cast<std::size_t>(std::popcount(mask));
      const double weight = FactorialAsDouble(s) *
                            FactorialAsDouble(p - s - 1) / p_factorial;
      phi[j] += weight * (value_of(mask | (1ULL << j)) - value_of(mask));
    }
  }
  return phi;
}

// Plain-arithmetic transcription of the product-ratio classification
// summary. Underflows for long samples, which is exactly why the library
// computes it in log space; the two must agree where this one is safe.
inline double NaiveClassificationG(const ModelOutput& probs,
                                   const std::vector<std::size_t>& positive,
                                   const std::vector<std::size_t>& negative) {
  double prod_pos = 1.0;
  double prod_neg = 1.0;
  for (std::size_t r = 0; r < probs.Rows(); ++r) {
    double mass_pos = 0.0;
    double mass_neg = 0.0;
    for (std::size_t c : positive) mass_pos += probs.Probability(r, c);
    for (std::size_t c : negative) mass_neg += probs.Probability(r, c);
    prod_pos *= mass_pos;
    prod_neg *= mass_neg;
  }
  return prod_pos / (prod_pos + prod_neg);
}

}  // namespace gshap::testutil

#endif  // GSHAP_TESTS_TEST_UTIL_HPP_
