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

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <numeric>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "json.hpp"

#include "gshap/error.hpp"
#include "gshap/rng.hpp"
#include "gshap/run.hpp"
#include "test_util.hpp"

namespace {

using gshap::AnalysisMode;
using gshap::ConfigError;
using gshap::DataError;
using gshap::ModelSpec;
using gshap::ParseModelSpec;
using gshap::RunExplain;
using gshap::RunOptions;
using gshap::RunResult;

std::string WriteTempCsv(const std::string& name, const std::string& body) {
  const std::filesystem::path path =
      std::filesystem::temp_directory_path() / name;
  std::ofstream out(path, std::ios::binary);
  out << body;
  out.close();
  return path.string();
}

// Two linearly separated label clusters over three features, of which only
// the first two carry signal.
std::string ClustersCsv(std::uint64_t seed, std::size_t n) {
  std::mt19937_64 rng = gshap::SubStream(seed, 0);
  std::ostringstream out;
  out << "x0,x1,noise,label\n";
  for (std::size_t i = 0; i < n; ++i) {
    const bool pos = i % 2 == 0;
    const double x0 = (pos ? 2.0 : -2.0) + 0.3 * gshap::testutil::Normal(rng);
    const double x1 = (pos ? 2.0 : -2.0) + 0.3 * gshap::testutil::Normal(rng);
    const double noise = gshap::testutil::Normal(rng);
    out << x0 << ',' << x1 << ',' << noise << ','
        << (pos ? "pos" : "neg") << '\n';
  }
  return out.str();
}

double PhiSum(const gshap::RunOutcome& outcome) {
  return std::accumulate(outcome.explanation.phi.begin(),
                         outcome.explanation.phi.end(), 0.0);
}

TEST_SUITE_BEGIN("run");

TEST_CASE("model specs parse kinds, parameters, and commands") {
  const ModelSpec knn = ParseModelSpec("knn:k=5");
  CHECK(knn.kind == "knn");
  CHECK(knn.params.at("k") == "5");
  CHECK(knn.command.empty());

  const ModelSpec pca = ParseModelSpec("pca_knn:components=5,k=4");
  CHECK(pca.params.at("components") == "5");
  CHECK(pca.params.at("k") == "4");

  const ModelSpec bare = ParseModelSpec("logistic");
  CHECK(bare.kind == "logistic");
  CHECK(bare.params.empty());

  const ModelSpec ext = ParseModelSpec("external:python3 serve.py --port=1:2");
  CHECK(ext.kind == "external");
  CHECK(ext.command == "python3 serve.py --port=1:2");
  const ModelSpec extc = ParseModelSpec("external-concurrent:./child run");
  CHECK(extc.kind == "external-concurrent");
  CHECK(extc.command == "./child run");

  CHECK_THROWS_AS(ParseModelSpec(""), ConfigError);
  CHECK_THROWS_AS(ParseModelSpec(":k=1"), ConfigError);
  CHECK_THROWS_AS(ParseModelSpec("knn:k"), ConfigError);
  CHECK_THROWS_AS(ParseModelSpec("knn:=5"), ConfigError);
  CHECK_THROWS_AS(ParseModelSpec("external"), ConfigError);
  CHECK_THROWS_AS(ParseModelSpec("external:"), ConfigError);
}

TEST_CASE("output mode produces a consistent, reproducible report") {
  const std::string path =
      WriteTempCsv("gshap_run_output.csv", ClustersCsv(1, 48));
  RunOptions options;
  options.mode = AnalysisMode::kOutput;
  options.data_path = path;
  options.schema.target_column = "label";
  options.model = "knn:k=3";
  options.positive_classes = {"pos"};
  options.engine.seed = 11;

  const RunResult result = RunExplain(options);
  REQUIRE(result.outcomes.size() == 1);
  CHECK(result.outcomes[0].label == "sample");
  CHECK(result.feature_names ==
        std::vector<std::string>{"x0", "x1", "noise"});

  const auto& outcome = result.outcomes[0];
  CHECK(std::abs(outcome.comparison.difference - PhiSum(outcome)) <= 1e-9);
  CHECK(outcome.comparison.g_sample ==
        doctest::Approx(outcome.comparison.g_background +
                        outcome.comparison.difference));

  const RunResult again = RunExplain(options);
  CHECK(again.report_json == result.report_json);
  CHECK(again.figure_csv == result.figure_csv);

  const nlohmann::json report = nlohmann::json::parse(result.report_json);
  CHECK(report.at("mode") == "output");
  CHECK(report.at("engine").at("seed") == 11);
  CHECK(report.at("engine").at("mode") == "exact");
  CHECK(report.at("outcomes").size() == 1);
  CHECK(report.at("outcomes").at(0).at("phi").size() == 3);
  CHECK(report.at("data").at("features").size() == 3);

  // Header plus one line per feature.
  std::istringstream figure(result.figure_csv);
  std::string line;
  std::getline(figure, line);
  CHECK(line == "feature,phi,phi_normalized");
  std::size_t rows = 0;
  while (std::getline(figure, line)) ++rows;
  CHECK(rows == 3);
}

TEST_CASE("sampled engine reports standard errors in the report") {
  const std::string path =
      WriteTempCsv("gshap_run_sampled.csv", ClustersCsv(2, 48));
  RunOptions options;
  options.mode = AnalysisMode::kOutput;
  options.data_path = path;
  options.schema.target_column = "label";
  options.model = "knn:k=3";
  options.positive_classes = {"pos"};
  options.engine.mode = gshap::EngineMode::kSampled;
  options.engine.permutations = 64;
  options.engine.background_draws = 4;
  options.engine.seed = 12;

  const RunResult result = RunExplain(options);
  const auto& outcome = result.outcomes[0];
  REQUIRE(outcome.explanation.std_error.size() == 3);
  CHECK(std::abs(outcome.comparison.difference - PhiSum(outcome)) <= 1e-9);

  const nlohmann::json report = nlohmann::json::parse(result.report_json);
  CHECK(report.at("engine").at("mode") == "sampled");
  CHECK(report.at("engine").at("permutations") == 64);
}

TEST_CASE("classification mode on a predicted-class sample is near one") {
  const std::string path =
      WriteTempCsv("gshap_run_classif.csv", ClustersCsv(3, 64));
  RunOptions options;
  options.mode = AnalysisMode::kClassification;
  options.data_path = path;
  options.schema.target_column = "label";
  options.model = "knn:k=3";
  options.positive_classes = {"pos"};
  options.negative_classes = {"neg"};
  options.sample_select = "predicted:pos";
  options.engine.seed = 4;

  const RunResult result = RunExplain(options);
  CHECK(result.outcomes[0].comparison.g_sample >= 0.99);

  // The class sets are mandatory in this mode.
  RunOptions missing = options;
  missing.negative_classes.clear();
  CHECK_THROWS_AS(RunExplain(missing), ConfigError);
}

TEST_CASE("predicted selector honors its subsample count") {
  const std::string path =
      WriteTempCsv("gshap_run_subsample.csv", ClustersCsv(5, 64));
  RunOptions options;
  options.mode = AnalysisMode::kOutput;
  options.data_path = path;
  options.schema.target_column = "label";
  options.model = "knn:k=3";
  options.positive_classes = {"pos"};
  options.sample_select = "predicted:pos";
  options.engine.seed = 6;

  const RunResult all = RunExplain(options);

  // A count at least as large as the number of matching rows keeps all of
  // them, so the attributions agree with the uncounted selector bitwise.
  options.sample_select = "predicted:pos:100000";
  const RunResult capped = RunExplain(options);
  CHECK(capped.outcomes[0].explanation.phi == all.outcomes[0].explanation.phi);

  // A smaller count explains a strict subsample.
  options.sample_select = "predicted:pos:2";
  const RunResult two = RunExplain(options);
  CHECK(two.outcomes[0].explanation.phi != all.outcomes[0].explanation.phi);
}

TEST_CASE("range and list selectors address original dataset rows") {
  const std::string path =
      WriteTempCsv("gshap_run_selectors.csv", ClustersCsv(7, 40));
  RunOptions options;
  options.mode = AnalysisMode::kOutput;
  options.data_path = path;
  options.schema.target_column = "label";
  options.model = "knn:k=3";
  options.positive_classes = {"pos"};
  options.engine.seed = 8;

  options.sample_select = "range:5:9";
  const RunResult by_range = RunExplain(options);
  options.sample_select = "list:5,6,7,8";
  const RunResult by_list = RunExplain(options);
  CHECK(by_range.outcomes[0].explanation.phi ==
        by_list.outcomes[0].explanation.phi);

  options.sample_select = "range:39:45";
  CHECK_THROWS_AS(RunExplain(options), ConfigError);
  options.sample_select = "list:0,99";
  CHECK_THROWS_AS(RunExplain(options), ConfigError);
  options.sample_select = "range:9:5";
  CHECK_THROWS_AS(RunExplain(options), ConfigError);
  options.sample_select = "frobnicate";
  CHECK_THROWS_AS(RunExplain(options), ConfigError);
  options.sample_select = "predicted:unheard_of_class";
  CHECK_THROWS_AS(RunExplain(options), ConfigError);
}

TEST_CASE("group-diff mode decomposes the intergroup difference") {
  std::mt19937_64 rng = gshap::SubStream(9, 0);
  std::ostringstream csv;
  csv << "score,extra,label,grp\n";
  for (int i = 0; i < 60; ++i) {
    const int grp = i % 2;
    const double score = 0.2 + 0.5 * grp + 0.1 * gshap::testutil::Normal(rng);
    const double extra = gshap::testutil::Normal(rng);
    csv << score << ',' << extra << ','
        << (score > 0.45 ? "yes" : "no") << ',' << grp << '\n';
  }
  const std::string path = WriteTempCsv("gshap_run_group.csv", csv.str());

  RunOptions options;
  options.mode = AnalysisMode::kGroupDiff;
  options.data_path = path;
  options.schema.target_column = "label";
  options.schema.group_column = "grp";
  options.model = "logistic:epochs=200,lr=0.2";
  options.positive_classes = {"yes"};
  options.group_measure = gshap::DifferenceMeasure::kAbsoluteMean;
  options.group_use_probability = true;
  options.engine.seed = 10;

  const RunResult result = RunExplain(options);
  const auto& outcome = result.outcomes[0];
  CHECK(std::abs(outcome.comparison.difference - PhiSum(outcome)) <= 1e-9);

  RunOptions no_group = options;
  no_group.schema.group_column.reset();
  CHECK_THROWS_AS(RunExplain(no_group), ConfigError);
}

TEST_CASE("failure mode compares train and test blocks in one run") {
  std::mt19937_64 rng = gshap::SubStream(13, 0);
  std::ostringstream csv;
  csv << "a,b,y\n";
  for (int i = 0; i < 40; ++i) {
    const double a = gshap::testutil::Normal(rng);
    const double b = gshap::testutil::Normal(rng);
    csv << a << ',' << b << ',' << (2.0 * a - b) << '\n';
  }
  const std::string path = WriteTempCsv("gshap_run_failure.csv", csv.str());

  RunOptions options;
  options.mode = AnalysisMode::kFailure;
  options.data_path = path;
  options.schema.target_column = "y";
  options.model = "knn_regressor:k=1";
  options.engine.seed = 14;

  const RunResult result = RunExplain(options);
  REQUIRE(result.outcomes.size() == 2);
  CHECK(result.outcomes[0].label == "train");
  CHECK(result.outcomes[1].label == "test");

  // k=1 recall of its own training targets: perfect fit on the train
  // block, so the report's train-side g is exactly one.
  CHECK(result.outcomes[0].comparison.g_sample == 1.0);

  for (const auto& outcome : result.outcomes) {
    CHECK(std::abs(outcome.comparison.difference - PhiSum(outcome)) <= 1e-9);
  }

  std::istringstream figure(result.figure_csv);
  std::string header;
  std::getline(figure, header);
  CHECK(header ==
        "feature,phi_train,phi_normalized_train,phi_test,"
        "phi_normalized_test");

  // The predicted-class selector has no meaning without a classifier over
  // held-out rows.
  RunOptions predicted = options;
  predicted.sample_select = "predicted:yes";
  CHECK_THROWS_AS(RunExplain(predicted), ConfigError);

  // An explicit block works and leaves the rest as training rows.
  RunOptions block = options;
  block.sample_select = "range:30:40";
  const RunResult ranged = RunExplain(block);
  CHECK(ranged.outcomes[1].label == "test");
}

TEST_CASE("zero total attribution leaves the normalized column empty") {
  std::ostringstream csv;
  csv << "u,v,y\n";
  std::mt19937_64 rng = gshap::SubStream(15, 0);
  for (int i = 0; i < 16; ++i) {
    csv << gshap::testutil::Normal(rng) << ',' << gshap::testutil::Normal(rng)
        << ",5\n";
  }
  const std::string path = WriteTempCsv("gshap_run_zero.csv", csv.str());

  RunOptions options;
  options.mode = AnalysisMode::kOutput;
  options.data_path = path;
  options.schema.target_column = "y";
  options.model = "knn_regressor:k=3";
  options.engine.seed = 16;

  const RunResult result = RunExplain(options);
  const auto& outcome = result.outcomes[0];
  CHECK_FALSE(outcome.normalized_valid);
  CHECK(outcome.phi_normalized.empty());

  std::istringstream figure(result.figure_csv);
  std::string line;
  std::getline(figure, line);
  while (std::getline(figure, line)) {
    CHECK(line.back() == ',');
  }

  const nlohmann::json report = nlohmann::json::parse(result.report_json);
  CHECK(report.at("outcomes").at(0).at("phi_normalized").is_null());
}

TEST_CASE("run errors carry their stage tags") {
  RunOptions options;
  options.mode = AnalysisMode::kOutput;
  options.data_path = "/nonexistent/file.csv";
  try {
    RunExplain(options);
    FAIL("expected a DataError");
  } catch (const DataError& e) {
    CHECK(std::string(e.what()).find("[load]") != std::string::npos);
  }

  const std::string path =
      WriteTempCsv("gshap_run_badmodel.csv", ClustersCsv(17, 20));
  options.data_path = path;
  options.schema.target_column = "label";
  options.model = "quantum:k=3";
  try {
    RunExplain(options);
    FAIL("expected a ConfigError");
  } catch (const ConfigError& e) {
    CHECK(std::string(e.what()).find("[fit]") != std::string::npos);
  }
}

TEST_SUITE_END();

}  // namespace
