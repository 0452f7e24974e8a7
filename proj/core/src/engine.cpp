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

#include "gshap/engine.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <cmath>
#include <mutex>
#include <thread>

#include "gshap/error.hpp"
#include "gshap/rng.hpp"

namespace gshap {

namespace {

void CheckSameColumns(const FeatureMatrix& sample,
                      const FeatureMatrix& background) {
  if (sample.ColumnNames() != background.ColumnNames()) {
    throw DataError("sample and background have different feature columns");
  }
}

void CheckConfig(const EngineConfig& config) {
  if (config.permutations == 0) {
    throw ConfigError("permutations must be at least 1");
  }
  if (config.background_draws == 0) {
    throw ConfigError("background_draws must be at least 1");
  }
  if (config.exact_background_cap == 0) {
    throw ConfigError("exact_background_cap must be at least 1");
  }
}

// Work items are claimed from a shared counter. Item order of execution is
// arbitrary, so bodies must write only to their own slot; every reduction
// over slots afterwards runs in index order, which keeps results
// independent of scheduling.
void ParallelFor(std::size_t items, std::size_t max_threads, bool concurrent,
                 const std::function<void(std::size_t)>& body) {
  std::size_t threads = max_threads;
  if (threads == 0) {
    threads = std::thread::hardware_concurrency();
    if (threads == 0) threads = 1;
  }
  if (!concurrent) threads = 1;
  if (threads > items) threads = items;
  if (threads <= 1) {
    for (std::size_t i = 0; i < items; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::atomic<bool> failed{false};
  std::mutex error_mutex;
  std::exception_ptr error;
  auto worker = [&] {
    for (;;) {
      if (failed.load(std::memory_order_relaxed)) return;
      const std::size_t i = next.fetch_add(1, std::memory_order_relaxed);
      if (i >= items) return;
      try {
        body(i);
      } catch (...) {
        const std::lock_guard<std::mutex> lock(error_mutex);
        if (!error) error = std::current_exception();
        failed.store(true, std::memory_order_relaxed);
        return;
      }
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(threads);
  for (std::size_t t = 0; t < threads; ++t) pool.emplace_back(worker);
  for (std::thread& t : pool) t.join();
  if (error) std::rethrow_exception(error);
}

template <typename Fn>
auto AnnotateCoalition(const Coalition& coalition, Fn&& fn) -> decltype(fn()) {
  try {
    return fn();
  } catch (const ConfigError& e) {
    throw ConfigError("coalition " + coalition.ToString() + ": " + e.what());
  } catch (const DataError& e) {
    throw DataError("coalition " + coalition.ToString() + ": " + e.what());
  } catch (const ComputeError& e) {
    throw ComputeError("coalition " + coalition.ToString() + ": " + e.what());
  }
}

// Background rows the exact sweep walks. A background above the cap is
// reduced to a seeded subsample so the sweep stays bounded; the induced
// set function is then exact over the reduced set.
FeatureMatrix EffectiveBackground(const FeatureMatrix& background,
                                  const EngineConfig& config) {
  if (background.Rows() <= config.exact_background_cap) return background;
  std::mt19937_64 rng = SubStream(config.seed, 0);
  const std::vector<std::size_t> keep = SampleWithoutReplacement(
      background.Rows(), config.exact_background_cap, rng);
  return background.SelectRows(keep);
}

// Pairing for one draw: sample row i gets background row (i + offset) mod
// |Z|, so a contiguous block of real background observations imputes the
// sample rather than an independent scramble per row.
FeatureMatrix RotatedBackground(const FeatureMatrix& sample,
                                const FeatureMatrix& background,
                                std::size_t offset) {
  std::vector<double> values;
  values.reserve(sample.Rows() * sample.Cols());
  for (std::size_t i = 0; i < sample.Rows(); ++i) {
    const auto row = background.Row((i + offset) % background.Rows());
    values.insert(values.end(), row.begin(), row.end());
  }
  return FeatureMatrix::WithSameSchema(background, std::move(values),
                                       sample.Rows());
}

// Coalition value against a fixed set of paired background matrices. The
// full coalition needs no imputation and short-circuits to g on the
// sample itself.
double CoalitionValue(const GeneralizedFunction& g, const BlackBoxModel& model,
                      const FeatureMatrix& sample,
                      const std::vector<FeatureMatrix>& paired_backgrounds,
                      const Coalition& coalition) {
  return AnnotateCoalition(coalition, [&] {
    if (coalition.Size() == coalition.FeatureCount()) {
      return g.Evaluate(model, sample);
    }
    double sum = 0.0;
    double first = 0.0;
    bool all_equal = true;
    for (std::size_t t = 0; t < paired_backgrounds.size(); ++t) {
      const double value = g.Evaluate(
          model, HybridCompose(sample, paired_backgrounds[t], coalition));
      if (t == 0) {
        first = value;
      } else {
        all_equal = all_equal && value == first;
      }
      sum += value;
    }
    // A sweep of identical values reduces to that value with no division
    // rounding, so a coalition whose imputed columns never reach g stays
    // bitwise equal to the full-coalition value.
    if (all_equal && !paired_backgrounds.empty()) return first;
    return sum / static_cast<double>(paired_backgrounds.size());
  });
}

std::vector<FeatureMatrix> ExactPairedBackgrounds(
    const FeatureMatrix& sample, const FeatureMatrix& background,
    const EngineConfig& config) {
  const FeatureMatrix effective = EffectiveBackground(background, config);
  std::vector<FeatureMatrix> paired;
  paired.reserve(effective.Rows());
  for (std::size_t offset = 0; offset < effective.Rows(); ++offset) {
    paired.push_back(RotatedBackground(sample, effective, offset));
  }
  return paired;
}

}  // namespace

double EvaluateCoalition(const GeneralizedFunction& g,
                         const BlackBoxModel& model,
                         const FeatureMatrix& sample,
                         const FeatureMatrix& background,
                         const Coalition& coalition,
                         const EngineConfig& config) {
  CheckSameColumns(sample, background);
  CheckConfig(config);
  if (sample.Cols() != coalition.FeatureCount()) {
    throw ConfigError("coalition feature count " +
                      std::to_string(coalition.FeatureCount()) +
                      " does not match matrix width " +
                      std::to_string(sample.Cols()));
  }
  std::vector<FeatureMatrix> paired;
  if (config.mode == EngineMode::kExact) {
    paired = ExactPairedBackgrounds(sample, background, config);
  } else {
    std::mt19937_64 rng = SubStream(config.seed, 0);
    paired.reserve(config.background_draws);
    for (std::size_t d = 0; d < config.background_draws; ++d) {
      const std::size_t offset =
          static_cast<std::size_t>(UniformIndex(rng, background.Rows()));
      paired.push_back(RotatedBackground(sample, background, offset));
    }
  }
  return CoalitionValue(g, model, sample, paired, coalition);
}

Explanation ExactGshapWithWeights(const GeneralizedFunction& g,
                                  const BlackBoxModel& model,
                                  const FeatureMatrix& sample,
                                  const FeatureMatrix& background,
                                  const EngineConfig& config,
                                  const CoalitionWeightFn& weight) {
  CheckSameColumns(sample, background);
  CheckConfig(config);
  const std::size_t p = sample.Cols();
  if (p > 64 || p > config.max_exact_features) {
    throw ConfigError("exact mode handles at most " +
                      std::to_string(std::min<std::size_t>(
                          config.max_exact_features, 64)) +
                      " features, got " + std::to_string(p) +
                      "; use sampled mode");
  }

  const std::vector<FeatureMatrix> paired =
      ExactPairedBackgrounds(sample, background, config);

  // Every coalition value exactly once, indexed by bitmask.
  const std::size_t coalition_count = std::size_t{1} << p;
  std::vector<double> value(coalition_count);
  ParallelFor(coalition_count, config.max_threads, model.ConcurrentSafe(),
              [&](std::size_t mask) {
                const Coalition coalition =
                    Coalition::FromMask(static_cast<std::uint64_t>(mask), p);
                value[mask] = CoalitionValue(g, model, sample, paired,
                                             coalition);
              });

  std::vector<double> kernel(p);
  for (std::size_t s = 0; s + 1 <= p; ++s) kernel[s] = weight(s, p);

  Explanation out;
  out.phi.assign(p, 0.0);
  for (std::size_t j = 0; j < p; ++j) {
    const std::size_t bit = std::size_t{1} << j;
    for (std::size_t mask = 0; mask < coalition_count; ++mask) {
      if (mask & bit) continue;
      const std::size_t size = static_cast<std::size_t>(
          std::popcount(static_cast<std::uint64_t>(mask)));
      out.phi[j] += kernel[size] * (value[mask | bit] - value[mask]);
    }
  }
  out.g_full = value[coalition_count - 1];
  out.g_empty = value[0];
  out.method = EngineMode::kExact;
  out.seed = config.seed;
  out.permutations = 0;
  out.background_draws = paired.size();
  return out;
}

Explanation ExactGshap(const GeneralizedFunction& g, const BlackBoxModel& model,
                       const FeatureMatrix& sample,
                       const FeatureMatrix& background,
                       const EngineConfig& config) {
  return ExactGshapWithWeights(
      g, model, sample, background, config,
      [](std::size_t s, std::size_t p) { return CoalitionWeight(s, p); });
}

Explanation SampledGshap(const GeneralizedFunction& g,
                         const BlackBoxModel& model,
                         const FeatureMatrix& sample,
                         const FeatureMatrix& background,
                         const EngineConfig& config) {
  CheckSameColumns(sample, background);
  CheckConfig(config);
  const std::size_t p = sample.Cols();
  if (p > 64) {
    throw ConfigError("coalitions support at most 64 features, got " +
                      std::to_string(p));
  }
  const std::size_t m = config.permutations;
  const std::size_t draws = config.background_draws;

  // The full coalition never imputes, so its value is shared by every
  // permutation chain.
  const double g_full = AnnotateCoalition(
      Coalition::Full(p), [&] { return g.Evaluate(model, sample); });

  // contributions[t * p + j]: marginal contribution of feature j in
  // permutation t. empty_values[t]: the chain's empty-coalition value.
  std::vector<double> contributions(m * p);
  std::vector<double> empty_values(m);

  ParallelFor(m, config.max_threads, model.ConcurrentSafe(), [&](std::size_t t) {
    std::mt19937_64 rng = SubStream(config.seed, t + 1);

    std::vector<std::size_t> order(p);
    for (std::size_t j = 0; j < p; ++j) order[j] = j;
    FisherYatesShuffle(order, rng);

    // One set of background pairings serves the whole telescoping chain,
    // so consecutive coalition values cancel exactly and the chain sums
    // to g_full - empty_values[t] with no residual.
    std::vector<FeatureMatrix> paired;
    paired.reserve(draws);
    for (std::size_t d = 0; d < draws; ++d) {
      const std::size_t offset =
          static_cast<std::size_t>(UniformIndex(rng, background.Rows()));
      paired.push_back(RotatedBackground(sample, background, offset));
    }

    Coalition coalition = Coalition::Empty(p);
    double previous = CoalitionValue(g, model, sample, paired, coalition);
    empty_values[t] = previous;
    for (std::size_t k = 0; k < p; ++k) {
      coalition = coalition.With(order[k]);
      const double current =
          k + 1 == p ? g_full
                     : CoalitionValue(g, model, sample, paired, coalition);
      contributions[t * p + order[k]] = current - previous;
      previous = current;
    }
  });

  Explanation out;
  out.phi.assign(p, 0.0);
  out.std_error.assign(p, 0.0);
  for (std::size_t j = 0; j < p; ++j) {
    double sum = 0.0;
    for (std::size_t t = 0; t < m; ++t) sum += contributions[t * p + j];
    out.phi[j] = sum / static_cast<double>(m);
  }
  if (m >= 2) {
    for (std::size_t j = 0; j < p; ++j) {
      double ss = 0.0;
      for (std::size_t t = 0; t < m; ++t) {
        const double d = contributions[t * p + j] - out.phi[j];
        ss += d * d;
      }
      const double stdev = std::sqrt(ss / static_cast<double>(m - 1));
      out.std_error[j] = stdev / std::sqrt(static_cast<double>(m));
    }
  }
  double empty_sum = 0.0;
  for (std::size_t t = 0; t < m; ++t) empty_sum += empty_values[t];
  out.g_full = g_full;
  out.g_empty = empty_sum / static_cast<double>(m);
  out.method = EngineMode::kSampled;
  out.seed = config.seed;
  out.permutations = m;
  out.background_draws = draws;
  return out;
}

std::vector<double> Normalize(const std::vector<double>& phi) {
  double sum = 0.0;
  for (const double v : phi) sum += v;
  if (sum == 0.0) {
    throw ComputeError("attributions sum to zero and cannot be normalized");
  }
  std::vector<double> out(phi.size());
  for (std::size_t j = 0; j < phi.size(); ++j) out[j] = phi[j] / sum;
  return out;
}

Comparison ComparisonReport(const GeneralizedFunction& g,
                            const BlackBoxModel& model,
                            const FeatureMatrix& sample,
                            const FeatureMatrix& background,
                            const Explanation& explanation) {
  CheckSameColumns(sample, background);
  if (explanation.phi.size() != sample.Cols()) {
    throw ConfigError("explanation covers " +
                      std::to_string(explanation.phi.size()) +
                      " features, sample has " + std::to_string(sample.Cols()));
  }
  Comparison out;
  out.g_sample = g.Evaluate(model, sample);
  out.g_background = explanation.g_empty;
  out.difference = out.g_sample - out.g_background;
  return out;
}

}  // namespace gshap
