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

#ifndef GSHAP_COALITION_HPP_
#define GSHAP_COALITION_HPP_

#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <string>
#include <vector>

#include "gshap/matrix.hpp"

namespace gshap {

// Subset of feature indices out of a fixed feature count, stored as a
// bitmask. The bitmask representation caps the feature count at 64, which
// also caps the exact engine; the sampling engine shares the type, so the
// cap applies everywhere. feature_count must be in [1, 64] and every
// member index below it.
class Coalition {
 public:
  static Coalition Empty(std::size_t feature_count);
  static Coalition Full(std::size_t feature_count);
  static Coalition Of(std::initializer_list<std::size_t> members,
                      std::size_t feature_count);
  static Coalition FromMask(std::uint64_t mask, std::size_t feature_count);

  bool Contains(std::size_t feature) const {
    return (mask_ >> feature) & 1ULL;
  }

  Coalition With(std::size_t feature) const;
  Coalition Without(std::size_t feature) const;
  Coalition Complement() const;

  std::size_t Size() const;
  std::size_t FeatureCount() const { return feature_count_; }
  std::uint64_t Mask() const { return mask_; }

  std::vector<std::size_t> Members() const;

  // Renders as "{0,2,5}"; the empty coalition renders as "{}".
  std::string ToString() const;

  bool operator==(const Coalition& other) const {
    return mask_ == other.mask_ && feature_count_ == other.feature_count_;
  }

 private:
  Coalition(std::uint64_t mask, std::size_t feature_count)
      : mask_(mask), feature_count_(feature_count) {}

  std::uint64_t mask_ = 0;
  std::size_t feature_count_ = 0;
};

// Shapley kernel weight |S|! (p - |S| - 1)! / p! for a coalition of size
// `coalition_size` excluding the feature of interest among `feature_count`
// features. Requires feature_count >= 1 and coalition_size <= feature_count
// - 1. Exact in integer arithmetic for feature_count <= 20, via lgamma
// above that.
double CoalitionWeight(std::size_t coalition_size, std::size_t feature_count);

// One evaluation row: features in `coalition` come from `sample_row`, the
// rest from `background_row`. Spans must both have matrix width length.
void HybridComposeRow(std::span<const double> sample_row,
                      std::span<const double> background_row,
                      const Coalition& coalition, std::vector<double>& out);

// Hybrid of two matrices with equal shape: row i takes coalition features
// from `sample` row i and the rest from `background` row i.
FeatureMatrix HybridCompose(const FeatureMatrix& sample,
                            const FeatureMatrix& background,
                            const Coalition& coalition);

}  // namespace gshap

#endif  // GSHAP_COALITION_HPP_
