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

#include <atomic>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <random>
#include <span>
#include <vector>

#include "doctest.h"
#include "gshap/engine.hpp"
#include "gshap/error.hpp"
#include "gshap/genfns.hpp"
#include "gshap/rng.hpp"
#include "test_util.hpp"

namespace {

using gshap::Coalition;
using gshap::Comparison;
using gshap::ComputeError;
using gshap::ConfigError;
using gshap::DataError;
using gshap::EngineConfig;
using gshap::EngineMode;
using gshap::EvaluateCoalition;
using gshap::ExactGshap;
using gshap::Explanation;
using gshap::FeatureMatrix;
using gshap::GeneralizedFunction;
using gshap::OutputFunction;
using gshap::SampledGshap;
using gshap::testutil::ConstantModel;
using gshap::testutil::LambdaModel;
using gshap::testutil::LinearModel;
using gshap::testutil::MakeMatrix;
using gshap::testutil::ProductModel;
using gshap::testutil::RandomMatrix;

EngineConfig ExactConfig() {
  EngineConfig config;
  config.mode = EngineMode::kExact;
  return config;
}

EngineConfig SampledConfig(std::size_t permutations, std::uint64_t seed) {
  EngineConfig config;
  config.mode = EngineMode::kSampled;
  config.permutations = permutations;
  config.background_draws = 4;
  config.seed = seed;
  return config;
}

// Forwards to another g while counting evaluations.
class CountingFunction : public GeneralizedFunction {
 public:
  CountingFunction(const GeneralizedFunction& inner,
                   std::atomic<std::size_t>& calls)
      : inner_(inner), calls_(calls) {}
  double Evaluate(const gshap::BlackBoxModel& model,
                  const FeatureMatrix& features) const override {
    calls_.fetch_add(1, std::memory_order_relaxed);
    return inner_.Evaluate(model, features);
  }
  std::string Name() const override { return inner_.Name(); }

 private:
  const GeneralizedFunction& inner_;
  std::atomic<std::size_t>& calls_;
};

TEST_SUITE_BEGIN("engine");

TEST_CASE("evaluate_coalition handles full, empty, and partial coalitions") {
  const LambdaModel sum = LinearModel({1.0, 1.0});
  const OutputFunction g;
  const FeatureMatrix x = MakeMatrix({{3.0, 5.0}});
  const FeatureMatrix z = MakeMatrix({{0.0, 0.0}});
  const EngineConfig config = ExactConfig();

  CHECK(EvaluateCoalition(g, sum, x, z, Coalition::Full(2), config) == 8.0);
  CHECK(EvaluateCoalition(g, sum, x, z, Coalition::Empty(2), config) == 0.0);
  CHECK(EvaluateCoalition(g, sum, x, z, Coalition::Of({0}, 2), config) ==
        3.0);

  // Full coalition ignores the background entirely.
  const FeatureMatrix z2 = MakeMatrix({{100.0, -100.0}});
  CHECK(EvaluateCoalition(g, sum, x, z2, Coalition::Full(2), config) == 8.0);
}

TEST_CASE("evaluate_coalition sweeps background offsets deterministically") {
  // With |X| = |Z| = 3 and the empty coalition, the exact sweep averages g
  // over all three rotations of the background rows. For a per-row model
  // summed by output_g each rotation has the same mean, so the result is
  // the background column mean.
  const LambdaModel first([](std::span<const double> row) { return row[0]; });
  const OutputFunction g;
  const FeatureMatrix x = MakeMatrix({{10.0}, {20.0}, {30.0}});
  const FeatureMatrix z = MakeMatrix({{1.0}, {2.0}, {4.0}});
  CHECK(EvaluateCoalition(g, first, x, z, Coalition::Empty(1),
                          ExactConfig()) ==
        doctest::Approx((1.0 + 2.0 + 4.0) / 3.0).epsilon(1e-12));
}

TEST_CASE("exact engine splits an additive model over its features") {
  const LambdaModel sum = LinearModel({1.0, 1.0});
  const OutputFunction g;
  const FeatureMatrix x = MakeMatrix({{3.0, 5.0}});
  const FeatureMatrix z = MakeMatrix({{0.0, 0.0}});
  const Explanation e = ExactGshap(g, sum, x, z, ExactConfig());

  REQUIRE(e.phi.size() == 2);
  CHECK(e.phi[0] == doctest::Approx(3.0).epsilon(1e-12));
  CHECK(e.phi[1] == doctest::Approx(5.0).epsilon(1e-12));
  CHECK(e.g_full == 8.0);
  CHECK(e.g_empty == 0.0);
  CHECK(e.method == EngineMode::kExact);
  CHECK(e.std_error.empty());
  CHECK(e.permutations == 0);
}

TEST_CASE("exact engine shares an interaction term equally") {
  const LambdaModel prod = ProductModel();
  const OutputFunction g;
  const FeatureMatrix x = MakeMatrix({{2.0, 3.0}});
  const FeatureMatrix z = MakeMatrix({{0.0, 0.0}});
  const Explanation e = ExactGshap(g, prod, x, z, ExactConfig());
  CHECK(e.phi[0] == doctest::Approx(3.0).epsilon(1e-12));
  CHECK(e.phi[1] == doctest::Approx(3.0).epsilon(1e-12));
}

TEST_CASE("exact engine gives an ignored feature exactly zero") {
  const LambdaModel partial([](std::span<const double> row) {
    return 2.0 * row[0] + row[2] * row[2];
  });
  const OutputFunction g;
  const FeatureMatrix x = RandomMatrix(31, 4, 3);
  const FeatureMatrix z = RandomMatrix(32, 6, 3);
  const Explanation e = ExactGshap(g, partial, x, z, ExactConfig());
  CHECK(e.phi[1] == 0.0);
}

TEST_CASE("exact engine satisfies efficiency on random instances") {
  std::mt19937_64 rng = gshap::SubStream(41, 0);
  for (int trial = 0; trial < 10; ++trial) {
    const std::size_t p = 2 + rng() % 5;
    const FeatureMatrix x = RandomMatrix(100 + trial, 3, p);
    const FeatureMatrix z = RandomMatrix(200 + trial, 7, p);
    std::vector<double> weights(p);
    for (double& w : weights) {
      w = gshap::testutil::UniformIn(rng, -2.0, 2.0);
    }
    const LambdaModel model([weights](std::span<const double> row) {
      double acc = 0.0;
      for (std::size_t j = 0; j < row.size(); ++j) {
        acc += weights[j] * row[j];
      }
      return acc + 0.5 * row[0] * row[row.size() - 1];
    });
    const OutputFunction g;
    const Explanation e = ExactGshap(g, model, x, z, ExactConfig());
    const double total = std::accumulate(e.phi.begin(), e.phi.end(), 0.0);
    const double diff = e.g_full - e.g_empty;
    CHECK(std::abs(total - diff) <= 1e-9 * std::max(1.0, std::abs(diff)));
  }
}

TEST_CASE("exact engine memoizes: one g call per coalition") {
  const LambdaModel sum = LinearModel({1.0, 0.5, -1.0, 2.0, 0.0, 1.5});
  const OutputFunction inner;
  std::atomic<std::size_t> calls{0};
  const CountingFunction g(inner, calls);
  const FeatureMatrix x = RandomMatrix(51, 3, 6);
  // A single background row means one pairing per coalition, so the call
  // count equals the coalition count exactly.
  const FeatureMatrix z = RandomMatrix(52, 1, 6);
  ExactGshap(g, sum, x, z, ExactConfig());
  CHECK(calls.load() == 64);
}

TEST_CASE("exact engine refuses too many features") {
  EngineConfig config = ExactConfig();
  config.max_exact_features = 4;
  const LambdaModel sum = LinearModel({1, 1, 1, 1, 1});
  const FeatureMatrix x = RandomMatrix(61, 2, 5);
  const FeatureMatrix z = RandomMatrix(62, 2, 5);
  CHECK_THROWS_WITH_AS(ExactGshap(OutputFunction(), sum, x, z, config),
                       doctest::Contains("sampled"), ConfigError);
}

TEST_CASE("engines reject mismatched sample and background schemas") {
  const LambdaModel sum = LinearModel({1.0, 1.0});
  const FeatureMatrix x = MakeMatrix({{1.0, 2.0}});
  const FeatureMatrix renamed = MakeMatrix({{0.0, 0.0}}, {"p", "q"});
  CHECK_THROWS_AS(ExactGshap(OutputFunction(), sum, x, renamed,
                             ExactConfig()),
                  DataError);
  CHECK_THROWS_AS(SampledGshap(OutputFunction(), sum, x, renamed,
                               SampledConfig(4, 0)),
                  DataError);
}

TEST_CASE("engine config bounds are validated") {
  const LambdaModel sum = LinearModel({1.0});
  const FeatureMatrix x = MakeMatrix({{1.0}});
  const FeatureMatrix z = MakeMatrix({{0.0}});
  EngineConfig config = SampledConfig(4, 0);
  config.permutations = 0;
  CHECK_THROWS_AS(SampledGshap(OutputFunction(), sum, x, z, config),
                  ConfigError);
  config = SampledConfig(4, 0);
  config.background_draws = 0;
  CHECK_THROWS_AS(SampledGshap(OutputFunction(), sum, x, z, config),
                  ConfigError);
  config = ExactConfig();
  config.exact_background_cap = 0;
  CHECK_THROWS_AS(ExactGshap(OutputFunction(), sum, x, z, config),
                  ConfigError);
}

TEST_CASE("errors raised inside a coalition name the coalition") {
  // A model that fails whenever feature 1 is imputed (value 100).
  const LambdaModel fragile([](std::span<const double> row) -> double {
    if (row[1] > 50.0) throw ComputeError("simulated failure");
    return row[0];
  });
  const FeatureMatrix x = MakeMatrix({{1.0, 2.0}});
  const FeatureMatrix z = MakeMatrix({{0.0, 100.0}});
  try {
    ExactGshap(OutputFunction(), fragile, x, z, ExactConfig());
    FAIL("expected a ComputeError");
  } catch (const ComputeError& e) {
    const std::string what = e.what();
    CHECK(what.find("coalition {") != std::string::npos);
    CHECK(what.find("simulated failure") != std::string::npos);
  }
}

TEST_CASE("single-permutation sampling telescopes exactly") {
  // Integer-valued model and data keep every coalition value exactly
  // representable, so the telescoped sum is bit-exact.
  const LambdaModel sum = LinearModel({1.0, 2.0, 4.0});
  const OutputFunction g;
  const FeatureMatrix x = MakeMatrix({{8.0, 16.0, 32.0}});
  const FeatureMatrix z = MakeMatrix({{1.0, 1.0, 1.0}});
  const Explanation e = SampledGshap(g, sum, x, z, SampledConfig(1, 5));
  const double total = std::accumulate(e.phi.begin(), e.phi.end(), 0.0);
  CHECK(total == e.g_full - e.g_empty);
  REQUIRE(e.std_error.size() == 3);
  CHECK(e.std_error[0] == 0.0);
  CHECK(e.std_error[1] == 0.0);
  CHECK(e.std_error[2] == 0.0);
  CHECK(e.method == EngineMode::kSampled);
  CHECK(e.permutations == 1);
}

TEST_CASE("sampled efficiency holds for every permutation count") {
  const LambdaModel model([](std::span<const double> row) {
    return row[0] * row[1] + 3.0 * row[2];
  });
  const OutputFunction g;
  const FeatureMatrix x = RandomMatrix(71, 4, 3);
  const FeatureMatrix z = RandomMatrix(72, 9, 3);
  for (std::size_t m : {1, 7, 64}) {
    const Explanation e = SampledGshap(g, model, x, z, SampledConfig(m, 9));
    const double total = std::accumulate(e.phi.begin(), e.phi.end(), 0.0);
    const double diff = e.g_full - e.g_empty;
    CHECK(std::abs(total - diff) <= 1e-9 * std::max(1.0, std::abs(diff)));
  }
}

TEST_CASE("sampled estimates converge to the exact values") {
  const LambdaModel model([](std::span<const double> row) {
    return row[0] * row[1] - 2.0 * row[2] + row[3];
  });
  const OutputFunction g;
  const FeatureMatrix x = RandomMatrix(81, 3, 4);
  const FeatureMatrix z = RandomMatrix(82, 8, 4);
  const Explanation exact = ExactGshap(g, model, x, z, ExactConfig());
  const Explanation sampled =
      SampledGshap(g, model, x, z, SampledConfig(4096, 13));
  for (std::size_t j = 0; j < 4; ++j) {
    CHECK(std::abs(sampled.phi[j] - exact.phi[j]) <=
          4.0 * sampled.std_error[j] + 1e-12);
  }
}

TEST_CASE("sampling gives an ignored feature zero within noise") {
  const LambdaModel partial([](std::span<const double> row) {
    return row[0] * row[0] + row[2];
  });
  const OutputFunction g;
  const FeatureMatrix x = RandomMatrix(91, 3, 3);
  const FeatureMatrix z = RandomMatrix(92, 6, 3);
  const Explanation e = SampledGshap(g, partial, x, z, SampledConfig(512, 3));
  CHECK(std::abs(e.phi[1]) <= 3.0 * e.std_error[1] + 1e-12);
}

TEST_CASE("fixed seeds reproduce explanations bitwise") {
  const LambdaModel model([](std::span<const double> row) {
    return row[0] * row[1] + row[2];
  });
  const OutputFunction g;
  const FeatureMatrix x = RandomMatrix(101, 3, 3);
  const FeatureMatrix z = RandomMatrix(102, 80, 3);

  const Explanation a = SampledGshap(g, model, x, z, SampledConfig(128, 77));
  const Explanation b = SampledGshap(g, model, x, z, SampledConfig(128, 77));
  CHECK(a.phi == b.phi);
  CHECK(a.std_error == b.std_error);
  CHECK(a.g_empty == b.g_empty);

  const Explanation c = SampledGshap(g, model, x, z, SampledConfig(128, 78));
  CHECK(a.phi != c.phi);

  // The background exceeds the exact cap, forcing the seeded subsample
  // path; that too must be reproducible.
  EngineConfig exact = ExactConfig();
  exact.seed = 5;
  const Explanation d = ExactGshap(g, model, x, z, exact);
  const Explanation e = ExactGshap(g, model, x, z, exact);
  CHECK(d.phi == e.phi);
}

TEST_CASE("results do not depend on thread count or model thread safety") {
  const LambdaModel parallel_ok([](std::span<const double> row) {
    return std::sin(row[0]) + row[1] * row[2];
  });
  const LambdaModel sequential(
      [](std::span<const double> row) {
        return std::sin(row[0]) + row[1] * row[2];
      },
      /*concurrent_safe=*/false);
  const OutputFunction g;
  const FeatureMatrix x = RandomMatrix(111, 4, 3);
  const FeatureMatrix z = RandomMatrix(112, 10, 3);

  EngineConfig one = ExactConfig();
  one.max_threads = 1;
  EngineConfig many = ExactConfig();
  many.max_threads = 8;

  const Explanation base = ExactGshap(g, parallel_ok, x, z, one);
  CHECK(ExactGshap(g, parallel_ok, x, z, many).phi == base.phi);
  CHECK(ExactGshap(g, sequential, x, z, many).phi == base.phi);

  const Explanation s1 =
      SampledGshap(g, parallel_ok, x, z, SampledConfig(64, 19));
  EngineConfig threaded = SampledConfig(64, 19);
  threaded.max_threads = 8;
  CHECK(SampledGshap(g, parallel_ok, x, z, threaded).phi == s1.phi);
  CHECK(SampledGshap(g, sequential, x, z, threaded).phi == s1.phi);
}

TEST_CASE("normalize divides by the total and rejects zero sums") {
  CHECK(gshap::Normalize({3.0, 5.0}) == std::vector<double>{0.375, 0.625});
  CHECK(gshap::Normalize({-1.0, 3.0}) == std::vector<double>{-0.5, 1.5});
  CHECK_THROWS_AS(gshap::Normalize({1.0, -1.0}), ComputeError);
}

TEST_CASE("comparison report restates the efficiency identity") {
  const LambdaModel model([](std::span<const double> row) {
    return row[0] * row[1] + row[2];
  });
  const OutputFunction g;
  const FeatureMatrix x = RandomMatrix(121, 3, 3);
  const FeatureMatrix z = RandomMatrix(122, 7, 3);
  const Explanation e = ExactGshap(g, model, x, z, ExactConfig());
  const Comparison report = gshap::ComparisonReport(g, model, x, z, e);

  CHECK(report.g_sample == doctest::Approx(g.Evaluate(model, x)));
  CHECK(report.g_background == e.g_empty);
  const double total = std::accumulate(e.phi.begin(), e.phi.end(), 0.0);
  CHECK(std::abs(report.difference - total) <= 1e-9);
}

TEST_CASE("comparison report edge cases") {
  const OutputFunction g;
  const FeatureMatrix x = MakeMatrix({{1.0, 2.0}});

  // Sample equal to a single-row background: no difference to explain.
  const LambdaModel model([](std::span<const double> row) {
    return row[0] + row[1];
  });
  const Explanation self = ExactGshap(g, model, x, x, ExactConfig());
  const Comparison report = gshap::ComparisonReport(g, model, x, x, self);
  CHECK(report.difference == 0.0);

  // Constant model: nothing moves.
  const LambdaModel constant = ConstantModel(4.0);
  const FeatureMatrix z = MakeMatrix({{9.0, 9.0}});
  const Explanation flat = ExactGshap(g, constant, x, z, ExactConfig());
  CHECK(flat.phi == std::vector<double>{0.0, 0.0});
  const Comparison flat_report =
      gshap::ComparisonReport(g, constant, x, z, flat);
  CHECK(flat_report.difference == 0.0);

  // An explanation of the wrong width is rejected.
  Explanation wrong = flat;
  wrong.phi = {1.0};
  CHECK_THROWS_AS(gshap::ComparisonReport(g, constant, x, z, wrong),
                  ConfigError);
}

TEST_CASE("exact attributions match an independent single-row transcription") {
  std::mt19937_64 rng = gshap::SubStream(131, 0);
  for (int trial = 0; trial < 5; ++trial) {
    const std::size_t p = 2 + rng() % 4;
    const FeatureMatrix x = RandomMatrix(300 + trial, 1, p);
    const FeatureMatrix z = RandomMatrix(400 + trial, 5, p);
    std::vector<double> weights(p);
    for (double& w : weights) {
      w = gshap::testutil::UniformIn(rng, -1.5, 1.5);
    }
    const LambdaModel model([weights](std::span<const double> row) {
      double acc = 1.0;
      for (std::size_t j = 0; j < row.size(); ++j) {
        acc += weights[j] * row[j];
      }
      return acc + row[0] * row[row.size() - 1];
    });
    const Explanation e =
        ExactGshap(OutputFunction(), model, x, z, ExactConfig());
    const std::vector<double> oracle =
        gshap::testutil::DirectShapleySingleRow(model, x.Row(0), z);
    for (std::size_t j = 0; j < p; ++j) {
      CHECK(e.phi[j] == doctest::Approx(oracle[j]).epsilon(1e-9));
    }
  }
}

TEST_SUITE_END();

}  // namespace
