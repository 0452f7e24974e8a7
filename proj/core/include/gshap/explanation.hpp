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

#ifndef GSHAP_EXPLANATION_HPP_
#define GSHAP_EXPLANATION_HPP_

#include <cstddef>
#include <cstdint>
#include <vector>

namespace gshap {

enum class EngineMode {
  kExact,
  kSampled,
};

// Attribution result for one (function, sample, background) evaluation.
// phi has one entry per feature. g_full and g_empty are the function value
// at the full and empty coalitions; exact attributions satisfy
// sum(phi) == g_full - g_empty up to floating-point error.
struct Explanation {
  std::vector<double> phi;
  double g_full = 0.0;
  double g_empty = 0.0;

  // Per-feature standard error of the estimate; empty for the exact
  // engine, zero everywhere for single-permutation sampling.
  std::vector<double> std_error;

  EngineMode method = EngineMode::kExact;
  std::uint64_t seed = 0;
  std::size_t permutations = 0;  // 0 for the exact engine
  std::size_t background_draws = 0;
};

// Attributions rescaled to sum to 1 (phi / sum(phi)). Signs are kept, so
// entries can leave [0, 1] when phi has mixed signs. ComputeError when the
// sum is exactly zero.
std::vector<double> Normalize(const std::vector<double>& phi);

// Function values behind a relative comparison between a sample and its
// background: difference = g_sample - g_background.
struct Comparison {
  double g_sample = 0.0;
  double g_background = 0.0;
  double difference = 0.0;
};

}  // namespace gshap

#endif  // GSHAP_EXPLANATION_HPP_
