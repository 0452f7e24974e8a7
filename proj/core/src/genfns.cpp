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

#include "gshap/genfns.hpp"

#include <algorithm>
#include <cmath>
#include <iterator>
#include <limits>

#include "gshap/error.hpp"

namespace gshap {

namespace {

std::vector<std::size_t> SortedUnique(std::vector<std::size_t> indices) {
  std::sort(indices.begin(), indices.end());
  indices.erase(std::unique(indices.begin(), indices.end()), indices.end());
  return indices;
}

// Per-row scalar view of a prediction batch: the scalar itself, or the
// designated class's probability.
std::vector<double> ScalarOutputs(
    const ModelOutput& output, const std::optional<std::string>& positive_class,
    const char* who) {
  std::vector<double> values(output.Rows());
  if (!output.IsProbabilistic()) {
    for (std::size_t r = 0; r < output.Rows(); ++r) {
      values[r] = output.Scalar(r);
    }
    return values;
  }
  if (!positive_class) {
    throw ConfigError(std::string(who) +
                      " needs a designated class for a probabilistic model");
  }
  const std::size_t cls = output.ClassIndex(*positive_class);
  for (std::size_t r = 0; r < output.Rows(); ++r) {
    values[r] = output.Probability(r, cls);
  }
  return values;
}

}  // namespace

ClassPartition::ClassPartition(std::vector<std::size_t> positive,
                               std::vector<std::size_t> negative)
    : positive_(SortedUnique(std::move(positive))),
      negative_(SortedUnique(std::move(negative))) {
  if (positive_.empty() || negative_.empty()) {
    throw ConfigError("both class sets must be nonempty");
  }
  std::vector<std::size_t> overlap;
  std::set_intersection(positive_.begin(), positive_.end(), negative_.begin(),
                        negative_.end(), std::back_inserter(overlap));
  if (!overlap.empty()) {
    throw ConfigError("class sets overlap at class index " +
                      std::to_string(overlap.front()));
  }
}

ClassPartition ClassPartition::FromNames(
    const std::vector<std::string>& positive,
    const std::vector<std::string>& negative, const ModelOutput& reference) {
  std::vector<std::size_t> pos, neg;
  pos.reserve(positive.size());
  neg.reserve(negative.size());
  for (const std::string& name : positive) {
    pos.push_back(reference.ClassIndex(name));
  }
  for (const std::string& name : negative) {
    neg.push_back(reference.ClassIndex(name));
  }
  return ClassPartition(std::move(pos), std::move(neg));
}

GroupAssignment::GroupAssignment(std::vector<int> group_of,
                                 DifferenceMeasure measure)
    : group_of_(std::move(group_of)), measure_(measure) {
  std::size_t counts[2] = {0, 0};
  for (std::size_t r = 0; r < group_of_.size(); ++r) {
    const int v = group_of_[r];
    if (v != 0 && v != 1) {
      throw ConfigError("group label for row " + std::to_string(r) +
                        " is not 0 or 1");
    }
    ++counts[v];
  }
  if (counts[0] == 0 || counts[1] == 0) {
    throw ConfigError("both groups must be nonempty");
  }
}

LabelSet::LabelSet(std::vector<double> targets, LossKind loss)
    : targets_(std::move(targets)), loss_(loss) {
  if (targets_.empty()) throw DataError("label set is empty");
  for (std::size_t r = 0; r < targets_.size(); ++r) {
    if (!std::isfinite(targets_[r])) {
      throw DataError("target for row " + std::to_string(r) +
                      " is not finite");
    }
  }
}

OutputFunction::OutputFunction(std::optional<std::string> positive_class)
    : positive_class_(std::move(positive_class)) {}

double OutputFunction::Evaluate(const BlackBoxModel& model,
                                const FeatureMatrix& features) const {
  const ModelOutput output = model.Predict(features);
  const std::vector<double> values =
      ScalarOutputs(output, positive_class_, "output_g");
  double sum = 0.0;
  for (const double v : values) sum += v;
  return sum / static_cast<double>(values.size());
}

ClassificationFunction::ClassificationFunction(ClassPartition partition)
    : partition_(std::move(partition)) {}

double ClassificationFunction::Evaluate(const BlackBoxModel& model,
                                        const FeatureMatrix& features) const {
  const ModelOutput output = model.Predict(features);
  if (!output.IsProbabilistic()) {
    throw ConfigError("classification_g needs a probabilistic model");
  }
  for (const std::size_t c : partition_.Positive()) {
    if (c >= output.Classes()) {
      throw ConfigError("class index " + std::to_string(c) +
                        " out of range for " +
                        std::to_string(output.Classes()) + " classes");
    }
  }
  for (const std::size_t c : partition_.Negative()) {
    if (c >= output.Classes()) {
      throw ConfigError("class index " + std::to_string(c) +
                        " out of range for " +
                        std::to_string(output.Classes()) + " classes");
    }
  }

  // Log-space products: log prod_i s(i) = sum_i log s(i). A zero mass on
  // one side makes that side's log-product -inf, which the final ratio
  // handles; zero mass on both sides of one row leaves the ratio undefined
  // for every coalition, so it is rejected.
  const double neg_inf = -std::numeric_limits<double>::infinity();
  double log_pos = 0.0;
  double log_neg = 0.0;
  for (std::size_t r = 0; r < output.Rows(); ++r) {
    double s_pos = 0.0;
    double s_neg = 0.0;
    for (const std::size_t c : partition_.Positive()) {
      s_pos += output.Probability(r, c);
    }
    for (const std::size_t c : partition_.Negative()) {
      s_neg += output.Probability(r, c);
    }
    if (s_pos == 0.0 && s_neg == 0.0) {
      throw ComputeError("row " + std::to_string(r) +
                         " has zero probability mass on both class sets");
    }
    log_pos += s_pos == 0.0 ? neg_inf : std::log(s_pos);
    log_neg += s_neg == 0.0 ? neg_inf : std::log(s_neg);
  }
  if (log_pos == neg_inf && log_neg == neg_inf) {
    // Both products vanish only jointly across rows: the ratio is 0/0 and
    // the symmetric completion applies.
    return 0.5;
  }
  if (log_pos == neg_inf) return 0.0;
  if (log_neg == neg_inf) return 1.0;
  // prod_pos / (prod_pos + prod_neg) as a logistic of the log-ratio.
  return 1.0 / (1.0 + std::exp(log_neg - log_pos));
}

IntergroupFunction::IntergroupFunction(GroupAssignment groups,
                                       std::optional<std::string> positive_class,
                                       bool use_probability)
    : groups_(std::move(groups)),
      positive_class_(std::move(positive_class)),
      use_probability_(use_probability) {}

double IntergroupFunction::Evaluate(const BlackBoxModel& model,
                                    const FeatureMatrix& features) const {
  if (groups_.Rows() != features.Rows()) {
    throw ConfigError("group assignment covers " +
                      std::to_string(groups_.Rows()) + " rows, sample has " +
                      std::to_string(features.Rows()));
  }
  const ModelOutput output = model.Predict(features);

  double sums[2] = {0.0, 0.0};
  std::size_t counts[2] = {0, 0};
  std::size_t designated = 0;
  if (output.IsProbabilistic()) {
    if (!positive_class_) {
      throw ConfigError(
          "intergroup_g needs a designated class for a probabilistic model");
    }
    designated = output.ClassIndex(*positive_class_);
  }
  for (std::size_t r = 0; r < output.Rows(); ++r) {
    double value;
    if (!output.IsProbabilistic()) {
      value = output.Scalar(r);
    } else if (use_probability_) {
      value = output.Probability(r, designated);
    } else {
      value = output.ArgmaxClass(r) == designated ? 1.0 : 0.0;
    }
    const int group = groups_.GroupOf()[r];
    sums[group] += value;
    ++counts[group];
  }
  const double mean0 = sums[0] / static_cast<double>(counts[0]);
  const double mean1 = sums[1] / static_cast<double>(counts[1]);
  if (groups_.Measure() == DifferenceMeasure::kAbsoluteMean) {
    return mean1 - mean0;
  }
  if (mean0 == 0.0) {
    throw ComputeError("relative difference undefined: group 0 mean is zero");
  }
  return mean1 / mean0 - 1.0;
}

LossFunction::LossFunction(LabelSet labels,
                           std::optional<std::string> positive_class)
    : labels_(std::move(labels)), positive_class_(std::move(positive_class)) {}

double LossFunction::Evaluate(const BlackBoxModel& model,
                              const FeatureMatrix& features) const {
  const std::vector<double>& y = labels_.Targets();
  if (y.size() != features.Rows()) {
    throw ConfigError("label set covers " + std::to_string(y.size()) +
                      " rows, sample has " + std::to_string(features.Rows()));
  }
  const ModelOutput output = model.Predict(features);
  const std::vector<double> predictions =
      ScalarOutputs(output, positive_class_, "loss_g");

  const std::size_t n = y.size();
  double ss_res = 0.0;
  for (std::size_t r = 0; r < n; ++r) {
    const double d = y[r] - predictions[r];
    ss_res += d * d;
  }
  if (labels_.Loss() == LossKind::kMeanSquaredError) {
    return -(ss_res / static_cast<double>(n));
  }
  if (n < 2) {
    throw ComputeError("r_squared needs at least two rows");
  }
  double mean_y = 0.0;
  for (const double v : y) mean_y += v;
  mean_y /= static_cast<double>(n);
  double ss_tot = 0.0;
  for (const double v : y) {
    const double d = v - mean_y;
    ss_tot += d * d;
  }
  if (ss_tot == 0.0) {
    throw ComputeError("r_squared undefined: targets are constant");
  }
  return 1.0 - ss_res / ss_tot;
}

}  // namespace gshap
