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

#include <cstdint>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "gshap/error.hpp"
#include "gshap/run.hpp"

namespace {

std::vector<std::string> SplitList(const std::string& text) {
  std::vector<std::string> out;
  std::size_t start = 0;
  for (std::size_t i = 0; i <= text.size(); ++i) {
    if (i == text.size() || text[i] == ',') {
      if (i > start) out.push_back(text.substr(start, i - start));
      start = i + 1;
    }
  }
  return out;
}

gshap::AnalysisMode ParseMode(const std::string& text) {
  if (text == "output") return gshap::AnalysisMode::kOutput;
  if (text == "classification") return gshap::AnalysisMode::kClassification;
  if (text == "group-diff") return gshap::AnalysisMode::kGroupDiff;
  if (text == "failure") return gshap::AnalysisMode::kFailure;
  throw gshap::ConfigError("unknown mode \"" + text + "\"");
}

void WriteFile(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw gshap::DataError("cannot open \"" + path + "\" for writing");
  }
  out << content;
  if (!out) {
    throw gshap::DataError("write to \"" + path + "\" failed");
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "Feature attributions for generalized model behaviors: explains any "
      "scalar summary of a model over a sample (joint class probability, "
      "group disparity, held-out fit) by Shapley decomposition against a "
      "background dataset."};
  app.require_subcommand(0, 1);

  std::uint64_t selfcheck_seed = 20260815;
  std::string inject_fault;
  CLI::App* selfcheck =
      app.add_subcommand("selfcheck", "Run the bundled verification battery");
  selfcheck->add_option("--seed", selfcheck_seed, "Fixture seed");
  selfcheck
      ->add_option("--inject-fault", inject_fault,
                   "Deliberately break an internal table to prove the checks "
                   "can fail")
      ->check(CLI::IsMember({"weights"}));

  std::string mode;
  std::string data;
  std::string schema;
  std::string model = "knn:k=5";
  std::string positive_classes;
  std::string negative_classes;
  std::string group_col;
  std::string group_measure = "relative_mean";
  std::string label_col;
  std::string loss = "r_squared";
  std::string engine = "exact";
  std::size_t permutations = 2048;
  std::size_t background_draws = 16;
  std::uint64_t seed = 0;
  std::string sample_select = "all";
  std::string out_report;
  std::string out_figure;

  app.add_option("--mode", mode,
                 "Analysis mode: output, classification, group-diff, failure");
  app.add_option("--data", data, "CSV dataset path");
  app.add_option("--schema", schema,
                 "Comma-separated feature columns (default: every column "
                 "not bound to --label-col/--group-col)");
  app.add_option("--model", model,
                 "Model spec: knn:k=5, knn_regressor:k=5, "
                 "logistic:epochs=500,lr=0.1, pca_knn:components=5,k=4, "
                 "external:<command>, external-concurrent:<command>")
      ->capture_default_str();
  app.add_option("--positive-classes", positive_classes,
                 "Comma-separated positive class labels (first one doubles "
                 "as the designated class outside classification mode)");
  app.add_option("--negative-classes", negative_classes,
                 "Comma-separated negative class labels");
  app.add_option("--group-col", group_col, "Group column name");
  app.add_option("--group-measure", group_measure,
                 "relative_mean, absolute_mean, relative_mean_prob, "
                 "absolute_mean_prob")
      ->capture_default_str()
      ->check(CLI::IsMember({"relative_mean", "absolute_mean",
                             "relative_mean_prob", "absolute_mean_prob"}));
  app.add_option("--label-col", label_col, "Target column name");
  app.add_option("--loss", loss, "r_squared (r2) or mean_squared_error (mse)")
      ->capture_default_str()
      ->check(CLI::IsMember(
          {"r_squared", "r2", "mean_squared_error", "mse"}));
  app.add_option("--engine", engine, "exact or sampled")
      ->capture_default_str()
      ->check(CLI::IsMember({"exact", "sampled"}));
  app.add_option("--permutations", permutations,
                 "Sampled-engine permutation count")
      ->capture_default_str();
  app.add_option("--background-draws", background_draws,
                 "Background pairings per sampled coalition evaluation")
      ->capture_default_str();
  app.add_option("--seed", seed, "Seed for every randomized stage")
      ->capture_default_str();
  app.add_option("--sample-select", sample_select,
                 "all, predicted:CLASS[:COUNT], range:START:END, or "
                 "list:I,J,... (failure mode: defines the held-out block)")
      ->capture_default_str();
  app.add_option("--out-report", out_report,
                 "Report JSON path (stdout when omitted)");
  app.add_option("--out-figure-data", out_figure, "Figure-data CSV path");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (*selfcheck) {
      gshap::SelfcheckOptions options;
      options.seed = selfcheck_seed;
      options.fault = inject_fault == "weights"
                          ? gshap::SelfcheckFault::kWeights
                          : gshap::SelfcheckFault::kNone;
      return gshap::RunSelfcheck(options, std::cout) == 0 ? 0 : 1;
    }

    if (mode.empty()) throw gshap::ConfigError("--mode is required");
    if (data.empty()) throw gshap::ConfigError("--data is required");

    gshap::RunOptions options;
    options.mode = ParseMode(mode);
    options.data_path = data;
    options.schema.feature_columns = SplitList(schema);
    if (!label_col.empty()) options.schema.target_column = label_col;
    if (!group_col.empty()) options.schema.group_column = group_col;
    options.model = model;
    options.positive_classes = SplitList(positive_classes);
    options.negative_classes = SplitList(negative_classes);
    options.group_measure =
        group_measure.rfind("relative_mean", 0) == 0
            ? gshap::DifferenceMeasure::kRelativeMean
            : gshap::DifferenceMeasure::kAbsoluteMean;
    options.group_use_probability =
        group_measure == "relative_mean_prob" ||
        group_measure == "absolute_mean_prob";
    options.loss = (loss == "mean_squared_error" || loss == "mse")
                       ? gshap::LossKind::kMeanSquaredError
                       : gshap::LossKind::kRSquared;
    options.engine.mode = engine == "sampled" ? gshap::EngineMode::kSampled
                                              : gshap::EngineMode::kExact;
    options.engine.permutations = permutations;
    options.engine.background_draws = background_draws;
    options.engine.seed = seed;
    options.sample_select = sample_select;

    const gshap::RunResult result = gshap::RunExplain(options);

    if (out_report.empty()) {
      std::cout << result.report_json;
    } else {
      WriteFile(out_report, result.report_json);
    }
    if (!out_figure.empty()) {
      WriteFile(out_figure, result.figure_csv);
    }
    return 0;
  } catch (const gshap::ConfigError& e) {
    std::cerr << "gshap: " << e.what() << '\n';
    return 1;
  } catch (const gshap::DataError& e) {
    std::cerr << "gshap: " << e.what() << '\n';
    return 2;
  } catch (const gshap::ComputeError& e) {
    std::cerr << "gshap: " << e.what() << '\n';
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "gshap: " << e.what() << '\n';
    return 3;
  }
}
