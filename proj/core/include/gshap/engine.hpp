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

#ifndef GSHAP_ENGINE_HPP_
#define GSHAP_ENGINE_HPP_

#include <cstddef>
#include <cstdint>
#include <functional>

#include "gshap/coalition.hpp"
#include "gshap/explanation.hpp"
#include "gshap/genfns.hpp"
#include "gshap/matrix.hpp"
#include "gshap/model.hpp"

namespace gshap {

struct EngineConfig {
  EngineMode mode = EngineMode::kExact;

  // Exact enumeration walks 2^p coalitions; above this width it refuses
  // with ConfigError rather than hang.
  std::size_t max_exact_features = 16;

  // Sampling effort: number of feature-order permutations.
  std::size_t permutations = 2048;

  // Background rows paired with each sample row per sampled evaluation.
  std::size_t background_draws = 16;

  // When the background has more rows than this, the exact engine
  // evaluates a seeded subsample of this size instead of every offset.
  std::size_t exact_background_cap = 64;

  std::uint64_t seed = 0;

  // 0 means use the hardware concurrency report.
  std::size_t max_threads = 0;
};

// g evaluated on the hybrid sample where `coalition` features keep their
// sample values and the rest are imputed from the background. The exact
// mode averages over a deterministic sweep of row offsets into the
// background; the sampled mode averages over seeded draws.
double EvaluateCoalition(const GeneralizedFunction& g,
                         const BlackBoxModel& model,
                         const FeatureMatrix& sample,
                         const FeatureMatrix& background,
                         const Coalition& coalition,
                         const EngineConfig& config);

// Exact attribution: full enumeration of all 2^p coalitions with the
// closed-form kernel weights. Satisfies efficiency to floating point:
// sum(phi) == g(full) - g(empty).
Explanation ExactGshap(const GeneralizedFunction& g, const BlackBoxModel& model,
                       const FeatureMatrix& sample,
                       const FeatureMatrix& background,
                       const EngineConfig& config);

// Weight-function seam for the exact engine. Production code always passes
// CoalitionWeight; the self-check injects a perturbed weight function here
// to prove the efficiency check can fail.
using CoalitionWeightFn = std::function<double(std::size_t, std::size_t)>;

Explanation ExactGshapWithWeights(const GeneralizedFunction& g,
                                  const BlackBoxModel& model,
                                  const FeatureMatrix& sample,
                                  const FeatureMatrix& background,
                                  const EngineConfig& config,
                                  const CoalitionWeightFn& weight);

// Monte Carlo attribution over uniformly sampled feature permutations.
// Unbiased for the exact value; phi is the mean marginal contribution and
// std_error its standard error across permutations.
Explanation SampledGshap(const GeneralizedFunction& g,
                         const BlackBoxModel& model,
                         const FeatureMatrix& sample,
                         const FeatureMatrix& background,
                         const EngineConfig& config);

// g on the intact sample versus g on the fully imputed sample:
// g_sample is recomputed on `sample` directly, g_background is the
// explanation's empty-coalition value, and difference = g_sample -
// g_background is the quantity the attributions decompose. `explanation`
// must come from the same (g, model, sample, background).
Comparison ComparisonReport(const GeneralizedFunction& g,
                            const BlackBoxModel& model,
                            const FeatureMatrix& sample,
                            const FeatureMatrix& background,
                            const Explanation& explanation);

}  // namespace gshap

#endif  // GSHAP_ENGINE_HPP_
