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

#ifndef GSHAP_RNG_HPP_
#define GSHAP_RNG_HPP_

#include <algorithm>
#include <cstdint>
#include <random>
#include <vector>

namespace gshap {

// Reproducibility helpers. Everything randomized in the library is a pure
// function of (inputs, seed), and results must be byte-identical across
// runs, so we avoid std::shuffle and the std distributions (their draw
// sequences are implementation-defined) and use mt19937_64 raw output
// with explicit rejection sampling instead.

inline std::uint64_t SplitMix64(std::uint64_t& state) {
  state += 0x9E3779B97F4A7C15ULL;
  std::uint64_t z = state;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

// Independent generator for work item `index` of a run seeded with `seed`.
// Items drawn from different indices never share a stream, which keeps
// parallel fan-out deterministic regardless of scheduling.
inline std::mt19937_64 SubStream(std::uint64_t seed, std::uint64_t index) {
  std::uint64_t state = seed ^ (0x9E3779B97F4A7C15ULL * (index + 1));
  const std::uint64_t a = SplitMix64(state);
  const std::uint64_t b = SplitMix64(state);
  return std::mt19937_64(a ^ (b << 32 | b >> 32));
}

// Unbiased draw from {0, ..., bound-1}. bound must be nonzero.
inline std::uint64_t UniformIndex(std::mt19937_64& rng, std::uint64_t bound) {
  const std::uint64_t threshold = (0 - bound) % bound;  // 2^64 mod bound
  for (;;) {
    const std::uint64_t r = rng();
    if (r >= threshold) return r % bound;
  }
}

template <typename T>
void FisherYatesShuffle(std::vector<T>& items, std::mt19937_64& rng) {
  if (items.size() < 2) return;
  for (std::size_t i = items.size() - 1; i > 0; --i) {
    const std::size_t j = static_cast<std::size_t>(UniformIndex(rng, i + 1));
    using std::swap;
    swap(items[i], items[j]);
  }
}

// First `count` elements of a seeded shuffle of {0, ..., n-1}, returned in
// ascending order. Used for subsampling rows while preserving row order.
inline std::vector<std::size_t> SampleWithoutReplacement(std::size_t n,
                                                         std::size_t count,
                                                         std::mt19937_64& rng) {
  std::vector<std::size_t> indices(n);
  for (std::size_t i = 0; i < n; ++i) indices[i] = i;
  FisherYatesShuffle(indices, rng);
  indices.resize(count < n ? count : n);
  std::sort(indices.begin(), indices.end());
  return indices;
}

}  // namespace gshap

#endif  // GSHAP_RNG_HPP_
