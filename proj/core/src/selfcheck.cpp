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

#include "gshap/run.hpp"

#include <cmath>
#include <cstdio>
#include <cstring>
#include <ostream>

#include "gshap/engine.hpp"
#include "gshap/error.hpp"
#include "gshap/rng.hpp"

namespace gshap {

namespace {

double UniformSigned(std::mt19937_64& rng) {
  return (static_cast<double>(rng() >> 11) * 0x1.0p-53) * 2.0 - 1.0;
}

FeatureMatrix RandomMatrix(std::mt19937_64& rng, std::size_t rows,
                           std::size_t cols) {
  std::vector<double> values(rows * cols);
  for (double& v : values) v = UniformSigned(rng);
  std::vector<std::string> names(cols);
  for (std::size_t c = 0; c < cols; ++c) names[c] = "x" + std::to_string(c);
  return FeatureMatrix(std::move(values), rows, std::move(names));
}

// Linear score plus one pairwise interaction, so sampled estimates have
// genuine variance across permutations.
class CurvedModel : public BlackBoxModel {
 public:
  CurvedModel(std::vector<double> weights, double interaction)
      : weights_(std::move(weights)), interaction_(interaction) {}

  ModelOutput Predict(const FeatureMatrix& features) const override {
    std::vector<double> out(features.Rows());
    for (std::size_t r = 0; r < features.Rows(); ++r) {
      const auto row = features.Row(r);
      double z = 0.0;
      for (std::size_t j = 0; j < weights_.size(); ++j) {
        z += weights_[j] * row[j];
      }
      z += interaction_ * row[0] * row[1];
      out[r] = z;
    }
    return ModelOutput::Scalars(std::move(out));
  }

 private:
  std::vector<double> weights_;
  double interaction_;
};

// Two-class wrapper: positive-class probability is the logistic of the
// wrapped score.
class CurvedClassifier : public BlackBoxModel {
 public:
  CurvedClassifier(std::vector<double> weights, double interaction)
      : scorer_(std::move(weights), interaction) {}

  ModelOutput Predict(const FeatureMatrix& features) const override {
    const ModelOutput scores = scorer_.Predict(features);
    std::vector<double> probs(features.Rows() * 2);
    for (std::size_t r = 0; r < features.Rows(); ++r) {
      const double p = 1.0 / (1.0 + std::exp(-scores.Scalar(r)));
      probs[r * 2] = 1.0 - p;
      probs[r * 2 + 1] = p;
    }
    return ModelOutput::Probabilities(std::move(probs), features.Rows(),
                                      {"neg", "pos"});
  }

 private:
  CurvedModel scorer_;
};

// Reads only the mean of columns 0 and 1, leaving every other column a
// provable dummy and columns 0/1 exact mirrors.
class MeanPairModel : public BlackBoxModel {
 public:
  ModelOutput Predict(const FeatureMatrix& features) const override {
    std::vector<double> out(features.Rows());
    for (std::size_t r = 0; r < features.Rows(); ++r) {
      const auto row = features.Row(r);
      out[r] = 0.5 * (row[0] + row[1]);
    }
    return ModelOutput::Scalars(std::move(out));
  }
};

class CheckPrinter {
 public:
  explicit CheckPrinter(std::ostream& out) : out_(out) {}

  void Report(const char* name, double measured, double tolerance) {
    const bool pass = measured <= tolerance;
    char line[160];
    std::snprintf(line, sizeof(line), "%-28s %s  measured=%.3e tolerance=%.1e",
                  name, pass ? "PASS" : "FAIL", measured, tolerance);
    out_ << line << '\n';
    ++total_;
    if (!pass) ++failures_;
  }

  int failures() const { return failures_; }
  int total() const { return total_; }

 private:
  std::ostream& out_;
  int total_ = 0;
  int failures_ = 0;
};

double EfficiencyGap(const Explanation& explanation) {
  double sum = 0.0;
  for (const double v : explanation.phi) sum += v;
  const double target = explanation.g_full - explanation.g_empty;
  return std::abs(sum - target) / std::max(1.0, std::abs(target));
}

double MaxAbsDelta(const std::vector<double>& a, const std::vector<double>& b) {
  double worst = 0.0;
  for (std::size_t j = 0; j < a.size(); ++j) {
    worst = std::max(worst, std::abs(a[j] - b[j]));
  }
  return worst;
}

}  // namespace

int RunSelfcheck(const SelfcheckOptions& options, std::ostream& out) {
  CheckPrinter printer(out);

  std::mt19937_64 fixture_rng = SubStream(options.seed, 900);
  const FeatureMatrix sample = RandomMatrix(fixture_rng, 3, 4);
  const FeatureMatrix background = RandomMatrix(fixture_rng, 5, 4);

  std::vector<double> weights(4);
  for (double& w : weights) w = UniformSigned(fixture_rng);
  const CurvedModel scalar_model(weights, 0.75);
  const CurvedClassifier classifier(weights, 0.75);

  EngineConfig exact_config;
  exact_config.mode = EngineMode::kExact;
  exact_config.seed = options.seed;

  const CoalitionWeightFn honest = [](std::size_t s, std::size_t p) {
    return CoalitionWeight(s, p);
  };
  // The perturbed kernel overweights even coalition sizes; attributions
  // then stop summing to g_full - g_empty, which the efficiency rows must
  // catch.
  const CoalitionWeightFn faulty = [](std::size_t s, std::size_t p) {
    return CoalitionWeight(s, p) * (s % 2 == 0 ? 1.05 : 1.0);
  };
  const CoalitionWeightFn& kernel =
      options.fault == SelfcheckFault::kWeights ? faulty : honest;

  {
    const OutputFunction g;
    printer.Report("efficiency/output_g",
                   EfficiencyGap(ExactGshapWithWeights(
                       g, scalar_model, sample, background, exact_config,
                       kernel)),
                   1e-9);
  }
  {
    const ClassificationFunction g(ClassPartition({1}, {0}));
    printer.Report("efficiency/classification_g",
                   EfficiencyGap(ExactGshapWithWeights(
                       g, classifier, sample, background, exact_config,
                       kernel)),
                   1e-9);
  }
  {
    const IntergroupFunction g(
        GroupAssignment({0, 1, 1}, DifferenceMeasure::kAbsoluteMean), "pos",
        true);
    printer.Report("efficiency/intergroup_g",
                   EfficiencyGap(ExactGshapWithWeights(
                       g, classifier, sample, background, exact_config,
                       kernel)),
                   1e-9);
  }
  {
    std::vector<double> targets(3);
    for (double& t : targets) t = UniformSigned(fixture_rng);
    const LossFunction g(LabelSet(std::move(targets), LossKind::kRSquared));
    printer.Report("efficiency/loss_g",
                   EfficiencyGap(ExactGshapWithWeights(
                       g, scalar_model, sample, background, exact_config,
                       kernel)),
                   1e-9);
  }

  {
    // Columns 0 and 1 mirrored in both matrices; the model reads their
    // mean, so the two features are exactly interchangeable.
    auto mirror = [](const FeatureMatrix& m) {
      std::vector<double> values(m.Values());
      for (std::size_t r = 0; r < m.Rows(); ++r) {
        values[r * m.Cols() + 1] = values[r * m.Cols()];
      }
      return FeatureMatrix::WithSameSchema(m, std::move(values), m.Rows());
    };
    const MeanPairModel model;
    const OutputFunction g;
    const Explanation explanation = ExactGshap(
        g, model, mirror(sample), mirror(background), exact_config);
    printer.Report("symmetry/duplicated_pair",
                   std::abs(explanation.phi[0] - explanation.phi[1]), 1e-9);
  }

  {
    std::vector<double> dummy_weights = weights;
    dummy_weights[2] = 0.0;
    const CurvedModel model(dummy_weights, 0.75);
    const OutputFunction g;
    const Explanation exact =
        ExactGshap(g, model, sample, background, exact_config);
    printer.Report("dummy/exact", std::abs(exact.phi[2]), 0.0);

    EngineConfig sampled_config = exact_config;
    sampled_config.mode = EngineMode::kSampled;
    sampled_config.permutations = 256;
    sampled_config.background_draws = 4;
    const Explanation sampled =
        SampledGshap(g, model, sample, background, sampled_config);
    printer.Report("dummy/sampled",
                   std::abs(sampled.phi[2]) -
                       3.0 * sampled.std_error[2],
                   1e-12);
  }

  {
    const OutputFunction g;
    const Explanation exact =
        ExactGshap(g, scalar_model, sample, background, exact_config);
    EngineConfig sampled_config = exact_config;
    sampled_config.mode = EngineMode::kSampled;
    sampled_config.permutations = 1024;
    sampled_config.background_draws = 4;
    const Explanation sampled =
        SampledGshap(g, scalar_model, sample, background, sampled_config);
    double worst = 0.0;
    for (std::size_t j = 0; j < exact.phi.size(); ++j) {
      const double gap = std::abs(sampled.phi[j] - exact.phi[j]) -
                         4.0 * sampled.std_error[j];
      worst = std::max(worst, gap);
    }
    printer.Report("consistency/sampled_vs_exact", worst, 1e-12);

    const Explanation repeat =
        SampledGshap(g, scalar_model, sample, background, sampled_config);
    const bool identical =
        repeat.phi.size() == sampled.phi.size() &&
        std::memcmp(repeat.phi.data(), sampled.phi.data(),
                    sampled.phi.size() * sizeof(double)) == 0;
    printer.Report("determinism/fixed_seed", identical ? 0.0 : 1.0, 0.0);
  }

  char summary[64];
  std::snprintf(summary, sizeof(summary), "selfcheck: %d/%d checks passed",
                printer.total() - printer.failures(), printer.total());
  out << summary << '\n';
  return printer.failures();
}

}  // namespace gshap
