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

#ifndef GSHAP_RUN_HPP_
#define GSHAP_RUN_HPP_

#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "gshap/engine.hpp"
#include "gshap/explanation.hpp"
#include "gshap/genfns.hpp"
#include "gshap/ingest.hpp"

namespace gshap {

enum class AnalysisMode {
  kOutput,
  kClassification,
  kGroupDiff,
  // Loss-based contrast: attributions on the training block against the
  // held-out block localize which features a model leans on where it
  // breaks. Both comparisons run in one invocation.
  kFailure,
};

// Parsed "kind:key=value,..." model description, e.g. "knn:k=5",
// "pca_knn:components=5,k=4". The external kinds ("external:CMD",
// "external-concurrent:CMD") keep everything after the first colon as the
// child command line instead.
struct ModelSpec {
  std::string kind;
  std::map<std::string, std::string> params;
  std::string command;
};

ModelSpec ParseModelSpec(const std::string& text);

struct RunOptions {
  AnalysisMode mode = AnalysisMode::kOutput;

  std::string data_path;
  CsvSchema schema;

  std::string model = "knn:k=5";

  // classification mode: the two class sets. Other probabilistic modes
  // read only the first positive class as the designated class.
  std::vector<std::string> positive_classes;
  std::vector<std::string> negative_classes;

  DifferenceMeasure group_measure = DifferenceMeasure::kRelativeMean;
  bool group_use_probability = false;

  LossKind loss = LossKind::kRSquared;

  EngineConfig engine;

  // Which rows to explain. "all" and "predicted:CLASS[:COUNT]" draw from
  // the held-out rows; "range:START:END" (half-open) and "list:I,J,..."
  // name original dataset row indices directly. In failure mode the
  // selector defines the held-out block instead, defaulting to the
  // trailing test_fraction of rows so ordered data keeps its structure.
  std::string sample_select = "all";

  double test_fraction = 0.25;
};

// One explained block. Ordinary runs produce a single outcome labeled
// "sample"; failure mode produces "train" and "test".
struct RunOutcome {
  std::string label;
  Comparison comparison;
  Explanation explanation;

  // phi / sum(phi); empty with normalized_valid == false when the sum is
  // exactly zero.
  std::vector<double> phi_normalized;
  bool normalized_valid = false;
};

struct RunResult {
  std::vector<std::string> feature_names;
  std::vector<RunOutcome> outcomes;

  // Serialized artifacts; byte-identical across runs with equal options.
  std::string report_json;
  std::string figure_csv;
};

RunResult RunExplain(const RunOptions& options);

enum class SelfcheckFault {
  kNone,
  // Perturbs the exact engine's kernel weights so the efficiency check
  // trips; proves the self-check can fail.
  kWeights,
};

struct SelfcheckOptions {
  std::uint64_t seed = 20260815;
  SelfcheckFault fault = SelfcheckFault::kNone;
};

// Built-in verification battery over synthetic fixtures: efficiency for
// every g variant, symmetry, dummy-feature null attribution, sampled
// versus exact agreement, and exact-engine determinism. Prints one line
// per check to `out` and returns the number of failed checks.
int RunSelfcheck(const SelfcheckOptions& options, std::ostream& out);

}  // namespace gshap

#endif  // GSHAP_RUN_HPP_
