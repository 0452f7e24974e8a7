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

#ifndef GSHAP_GENFNS_HPP_
#define GSHAP_GENFNS_HPP_

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "gshap/matrix.hpp"
#include "gshap/model.hpp"

namespace gshap {

// Two disjoint nonempty class-index sets over a model's class list. Stored
// sorted and deduplicated.
class ClassPartition {
 public:
  ClassPartition(std::vector<std::size_t> positive,
                 std::vector<std::size_t> negative);

  static ClassPartition FromNames(const std::vector<std::string>& positive,
                                  const std::vector<std::string>& negative,
                                  const ModelOutput& reference);

  const std::vector<std::size_t>& Positive() const { return positive_; }
  const std::vector<std::size_t>& Negative() const { return negative_; }

 private:
  std::vector<std::size_t> positive_;
  std::vector<std::size_t> negative_;
};

enum class DifferenceMeasure {
  kRelativeMean,  // mean(group1) / mean(group0) - 1
  kAbsoluteMean,  // mean(group1) - mean(group0)
};

// Binary split of the evaluation rows plus the between-group measure.
// group_of has one entry per row, each 0 or 1, and both groups must be
// nonempty.
class GroupAssignment {
 public:
  GroupAssignment(std::vector<int> group_of, DifferenceMeasure measure);

  const std::vector<int>& GroupOf() const { return group_of_; }
  DifferenceMeasure Measure() const { return measure_; }
  std::size_t Rows() const { return group_of_.size(); }

 private:
  std::vector<int> group_of_;
  DifferenceMeasure measure_;
};

enum class LossKind {
  kRSquared,
  kMeanSquaredError,
};

// Ground-truth targets aligned with the evaluation rows, plus the fit
// measure. kRSquared needs at least two rows and nonzero target variance;
// violations surface as ComputeError when the loss is evaluated.
class LabelSet {
 public:
  LabelSet(std::vector<double> targets, LossKind loss);

  const std::vector<double>& Targets() const { return targets_; }
  LossKind Loss() const { return loss_; }

 private:
  std::vector<double> targets_;
  LossKind loss_;
};

// Scalar summary g(f, X) of a model's behavior over a whole sample. The
// attribution engines explain this value, so anything expressible here
// (accuracy gaps, group disparities, fit quality) can be attributed to
// features with the same machinery as plain output explanations.
class GeneralizedFunction {
 public:
  virtual ~GeneralizedFunction() = default;

  virtual double Evaluate(const BlackBoxModel& model,
                          const FeatureMatrix& features) const = 0;

  virtual std::string Name() const = 0;
};

// Mean model output over the sample. Probabilistic models need a
// designated class whose probability is averaged.
class OutputFunction : public GeneralizedFunction {
 public:
  explicit OutputFunction(std::optional<std::string> positive_class = {});

  double Evaluate(const BlackBoxModel& model,
                  const FeatureMatrix& features) const override;
  std::string Name() const override { return "output_g"; }

 private:
  std::optional<std::string> positive_class_;
};

// Ratio prod(s_plus) / (prod(s_plus) + prod(s_minus)) where s_plus (resp.
// s_minus) is each row's total probability over the positive (negative)
// class set. Computed in log space so hundreds of rows cannot underflow.
// A row with both totals zero is a ComputeError naming the row. When the
// two products are both zero only jointly across rows the ratio is 0/0
// and defined as 0.5.
class ClassificationFunction : public GeneralizedFunction {
 public:
  explicit ClassificationFunction(ClassPartition partition);

  double Evaluate(const BlackBoxModel& model,
                  const FeatureMatrix& features) const override;
  std::string Name() const override { return "classification_g"; }

 private:
  ClassPartition partition_;
};

// Between-group difference of mean predictions: relative (mean1 / mean0
// - 1) or absolute (mean1 - mean0). For probabilistic models the per-row
// value is either the argmax-equals-class indicator or, with
// use_probability, the designated class's probability. Relative mode with
// a zero group-0 mean is a ComputeError.
class IntergroupFunction : public GeneralizedFunction {
 public:
  IntergroupFunction(GroupAssignment groups,
                     std::optional<std::string> positive_class = {},
                     bool use_probability = false);

  double Evaluate(const BlackBoxModel& model,
                  const FeatureMatrix& features) const override;
  std::string Name() const override { return "intergroup_g"; }

 private:
  GroupAssignment groups_;
  std::optional<std::string> positive_class_;
  bool use_probability_;
};

// Model fit against held-out targets, oriented so larger is better:
// R squared, or the negated mean squared error. Probabilistic models
// contribute the designated class's probability as the prediction.
class LossFunction : public GeneralizedFunction {
 public:
  explicit LossFunction(LabelSet labels,
                        std::optional<std::string> positive_class = {});

  double Evaluate(const BlackBoxModel& model,
                  const FeatureMatrix& features) const override;
  std::string Name() const override { return "loss_g"; }

 private:
  LabelSet labels_;
  std::optional<std::string> positive_class_;
};

}  // namespace gshap

#endif  // GSHAP_GENFNS_HPP_
