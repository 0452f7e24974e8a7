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

#include <algorithm>
#include <charconv>
#include <cmath>
#include <memory>
#include <set>

#include "json.hpp"

#include "gshap/error.hpp"
#include "gshap/external_model.hpp"
#include "gshap/knn.hpp"
#include "gshap/logistic.hpp"
#include "gshap/model.hpp"
#include "gshap/pca.hpp"
#include "gshap/rng.hpp"
#include "gshap/text.hpp"

namespace gshap {

namespace {

std::size_t ParseSize(const std::string& text, const std::string& context) {
  std::size_t value = 0;
  const auto result =
      std::from_chars(text.data(), text.data() + text.size(), value);
  if (result.ec != std::errc() || result.ptr != text.data() + text.size()) {
    throw ConfigError(context + ": not a nonnegative integer: \"" + text +
                      "\"");
  }
  return value;
}

// Key/value parameters of a model spec, with unknown keys rejected once
// every known key was consumed.
class Params {
 public:
  explicit Params(const std::map<std::string, std::string>& kv) : kv_(kv) {}

  std::size_t GetSize(const std::string& key, std::size_t fallback) {
    used_.insert(key);
    const auto it = kv_.find(key);
    if (it == kv_.end()) return fallback;
    return ParseSize(it->second, "model parameter " + key);
  }

  double GetDouble(const std::string& key, double fallback) {
    used_.insert(key);
    const auto it = kv_.find(key);
    if (it == kv_.end()) return fallback;
    return ParseDouble(it->second, "model parameter " + key);
  }

  void CheckExhausted() const {
    for (const auto& [key, value] : kv_) {
      if (!used_.count(key)) {
        throw ConfigError("unknown model parameter \"" + key + "\"");
      }
    }
  }

 private:
  const std::map<std::string, std::string>& kv_;
  std::set<std::string> used_;
};

std::unique_ptr<BlackBoxModel> BuildModel(const ModelSpec& spec,
                                          const Dataset& train) {
  if (spec.kind == "external" || spec.kind == "external-concurrent") {
    return std::make_unique<ExternalModel>(
        spec.command, spec.kind == "external-concurrent");
  }
  Params params(spec.params);
  if (spec.kind == "knn") {
    const std::size_t k = params.GetSize("k", 5);
    params.CheckExhausted();
    if (!train.HasTarget()) {
      throw ConfigError("model knn needs a target column");
    }
    return std::make_unique<KnnClassifier>(train.Features(), train.TargetRaw(),
                                           k);
  }
  if (spec.kind == "knn_regressor") {
    const std::size_t k = params.GetSize("k", 5);
    params.CheckExhausted();
    if (!train.HasTarget()) {
      throw ConfigError("model knn_regressor needs a target column");
    }
    return std::make_unique<KnnRegressor>(train.Features(),
                                          train.TargetNumeric(), k);
  }
  if (spec.kind == "logistic") {
    LogisticConfig config;
    config.epochs = params.GetSize("epochs", config.epochs);
    config.learning_rate = params.GetDouble("lr", config.learning_rate);
    params.CheckExhausted();
    if (!train.HasTarget()) {
      throw ConfigError("model logistic needs a target column");
    }
    return std::make_unique<LogisticClassifier>(train.Features(),
                                                train.TargetRaw(), config);
  }
  if (spec.kind == "pca_knn") {
    const std::size_t components = params.GetSize("components", 5);
    const std::size_t k = params.GetSize("k", 4);
    params.CheckExhausted();
    if (!train.HasTarget()) {
      throw ConfigError("model pca_knn needs a target column");
    }
    return std::make_unique<PcaKnnRegressor>(
        train.Features(), train.TargetNumeric(), components, k);
  }
  throw ConfigError("unknown model kind \"" + spec.kind + "\"");
}

struct Selector {
  enum class Kind { kAll, kPredicted, kRange, kList };
  Kind kind = Kind::kAll;
  std::string predicted_class;
  std::optional<std::size_t> predicted_count;
  std::size_t begin = 0;
  std::size_t end = 0;
  std::vector<std::size_t> list;
};

Selector ParseSelector(const std::string& text) {
  Selector out;
  if (text == "all") {
    out.kind = Selector::Kind::kAll;
    return out;
  }
  if (text.rfind("predicted:", 0) == 0) {
    out.kind = Selector::Kind::kPredicted;
    const std::string rest = text.substr(10);
    const std::size_t colon = rest.find(':');
    if (colon == std::string::npos) {
      out.predicted_class = rest;
    } else {
      out.predicted_class = rest.substr(0, colon);
      out.predicted_count =
          ParseSize(rest.substr(colon + 1), "sample selector count");
    }
    if (out.predicted_class.empty()) {
      throw ConfigError("sample selector \"" + text + "\" names no class");
    }
    return out;
  }
  if (text.rfind("range:", 0) == 0) {
    out.kind = Selector::Kind::kRange;
    const std::string rest = text.substr(6);
    const std::size_t colon = rest.find(':');
    if (colon == std::string::npos) {
      throw ConfigError("sample selector \"" + text +
                        "\" needs range:START:END");
    }
    out.begin = ParseSize(rest.substr(0, colon), "sample selector start");
    out.end = ParseSize(rest.substr(colon + 1), "sample selector end");
    if (out.begin >= out.end) {
      throw ConfigError("sample selector range is empty");
    }
    return out;
  }
  if (text.rfind("list:", 0) == 0) {
    out.kind = Selector::Kind::kList;
    const std::string rest = text.substr(5);
    std::size_t start = 0;
    for (std::size_t i = 0; i <= rest.size(); ++i) {
      if (i == rest.size() || rest[i] == ',') {
        out.list.push_back(
            ParseSize(rest.substr(start, i - start), "sample selector index"));
        start = i + 1;
      }
    }
    if (out.list.empty()) {
      throw ConfigError("sample selector list is empty");
    }
    return out;
  }
  throw ConfigError("unknown sample selector \"" + text + "\"");
}

std::vector<std::size_t> CheckedIndices(const std::vector<std::size_t>& rows,
                                        std::size_t n) {
  for (const std::size_t r : rows) {
    if (r >= n) {
      throw ConfigError("sample selector row " + std::to_string(r) +
                        " out of range for " + std::to_string(n) + " rows");
    }
  }
  return rows;
}

// Rows to explain in the ordinary modes: selection over the held-out rows
// for "all"/"predicted", absolute dataset rows for "range"/"list".
std::vector<std::size_t> SelectSampleRows(const Selector& selector,
                                          const Dataset& full,
                                          const std::vector<std::size_t>& test_rows,
                                          const BlackBoxModel& model,
                                          std::uint64_t select_seed) {
  switch (selector.kind) {
    case Selector::Kind::kAll:
      return test_rows;
    case Selector::Kind::kRange: {
      if (selector.end > full.Features().Rows()) {
        throw ConfigError("sample selector range end " +
                          std::to_string(selector.end) +
                          " out of range for " +
                          std::to_string(full.Features().Rows()) + " rows");
      }
      std::vector<std::size_t> rows;
      for (std::size_t r = selector.begin; r < selector.end; ++r) {
        rows.push_back(r);
      }
      return rows;
    }
    case Selector::Kind::kList:
      return CheckedIndices(selector.list, full.Features().Rows());
    case Selector::Kind::kPredicted:
      break;
  }
  const FeatureMatrix test_features = full.Features().SelectRows(test_rows);
  const ModelOutput output = model.Predict(test_features);
  if (!output.IsProbabilistic()) {
    throw ConfigError(
        "sample selector \"predicted\" needs a probabilistic model");
  }
  const std::size_t wanted = output.ClassIndex(selector.predicted_class);
  std::vector<std::size_t> matching;
  for (std::size_t i = 0; i < test_rows.size(); ++i) {
    if (output.ArgmaxClass(i) == wanted) matching.push_back(test_rows[i]);
  }
  if (matching.empty()) {
    throw DataError("no held-out rows predicted as \"" +
                    selector.predicted_class + "\"");
  }
  if (selector.predicted_count && *selector.predicted_count < matching.size()) {
    std::mt19937_64 rng = SubStream(select_seed, 0);
    const std::vector<std::size_t> keep = SampleWithoutReplacement(
        matching.size(), *selector.predicted_count, rng);
    std::vector<std::size_t> subset;
    subset.reserve(keep.size());
    for (const std::size_t i : keep) subset.push_back(matching[i]);
    return subset;
  }
  return matching;
}

std::optional<std::string> DesignatedClass(const RunOptions& options) {
  if (options.positive_classes.empty()) return std::nullopt;
  return options.positive_classes.front();
}

const char* ModeName(AnalysisMode mode) {
  switch (mode) {
    case AnalysisMode::kOutput: return "output";
    case AnalysisMode::kClassification: return "classification";
    case AnalysisMode::kGroupDiff: return "group-diff";
    case AnalysisMode::kFailure: return "failure";
  }
  return "?";
}

Explanation Explain(const GeneralizedFunction& g, const BlackBoxModel& model,
                    const FeatureMatrix& sample, const FeatureMatrix& background,
                    const EngineConfig& config) {
  if (config.mode == EngineMode::kExact) {
    return ExactGshap(g, model, sample, background, config);
  }
  return SampledGshap(g, model, sample, background, config);
}

RunOutcome MakeOutcome(const std::string& label, const GeneralizedFunction& g,
                       const BlackBoxModel& model, const FeatureMatrix& sample,
                       const FeatureMatrix& background,
                       const EngineConfig& config) {
  RunOutcome out;
  out.label = label;
  out.explanation = WithStage("explain", [&] {
    return Explain(g, model, sample, background, config);
  });
  out.comparison = WithStage("report", [&] {
    return ComparisonReport(g, model, sample, background, out.explanation);
  });
  try {
    out.phi_normalized = Normalize(out.explanation.phi);
    out.normalized_valid = true;
  } catch (const ComputeError&) {
    out.phi_normalized.clear();
    out.normalized_valid = false;
  }
  return out;
}

nlohmann::ordered_json OutcomeJson(const RunOutcome& outcome,
                                   std::size_t feature_count) {
  nlohmann::ordered_json j;
  j["label"] = outcome.label;
  j["g_sample"] = outcome.comparison.g_sample;
  j["g_background"] = outcome.comparison.g_background;
  j["difference"] = outcome.comparison.difference;
  j["phi"] = outcome.explanation.phi;
  if (outcome.explanation.std_error.empty()) {
    j["std_error"] = std::vector<double>(feature_count, 0.0);
  } else {
    j["std_error"] = outcome.explanation.std_error;
  }
  if (outcome.normalized_valid) {
    j["phi_normalized"] = outcome.phi_normalized;
  } else {
    j["phi_normalized"] = nullptr;
  }
  return j;
}

void BuildArtifacts(const RunOptions& options, const Dataset& full,
                    RunResult& result) {
  nlohmann::ordered_json report;
  report["mode"] = ModeName(options.mode);
  report["data"] = {{"path", options.data_path},
                    {"rows", full.Features().Rows()},
                    {"features", result.feature_names}};
  report["model"] = options.model;
  report["sample_select"] = options.sample_select;

  const Explanation& reference = result.outcomes.front().explanation;
  report["engine"] = {
      {"mode", reference.method == EngineMode::kExact ? "exact" : "sampled"},
      {"seed", reference.seed},
      {"permutations", reference.permutations},
      {"background_draws", reference.background_draws}};

  nlohmann::ordered_json outcomes = nlohmann::ordered_json::array();
  for (const RunOutcome& outcome : result.outcomes) {
    outcomes.push_back(OutcomeJson(outcome, result.feature_names.size()));
  }
  report["outcomes"] = std::move(outcomes);
  result.report_json = report.dump(2) + "\n";

  std::string csv = "feature";
  if (result.outcomes.size() == 1) {
    csv += ",phi,phi_normalized\n";
  } else {
    for (const RunOutcome& outcome : result.outcomes) {
      csv += ",phi_" + outcome.label + ",phi_normalized_" + outcome.label;
    }
    csv += "\n";
  }
  for (std::size_t j = 0; j < result.feature_names.size(); ++j) {
    csv += result.feature_names[j];
    for (const RunOutcome& outcome : result.outcomes) {
      csv += ',' + FormatDouble(outcome.explanation.phi[j]);
      csv += ',';
      if (outcome.normalized_valid) {
        csv += FormatDouble(outcome.phi_normalized[j]);
      }
    }
    csv += '\n';
  }
  result.figure_csv = std::move(csv);
}

RunResult RunFailureMode(const RunOptions& options, const Dataset& full,
                         const ModelSpec& spec, std::uint64_t shuffle_seed) {
  const std::size_t n = full.Features().Rows();
  const Selector selector = ParseSelector(options.sample_select);

  std::vector<std::size_t> test_rows = WithStage("split", [&] {
    switch (selector.kind) {
      case Selector::Kind::kAll: {
        const std::size_t test_n = static_cast<std::size_t>(
            std::llround(static_cast<double>(n) * options.test_fraction));
        if (test_n == 0 || test_n >= n) {
          throw ConfigError("failure-mode split leaves an empty side");
        }
        std::vector<std::size_t> rows;
        for (std::size_t r = n - test_n; r < n; ++r) rows.push_back(r);
        return rows;
      }
      case Selector::Kind::kRange: {
        if (selector.end > n) {
          throw ConfigError("sample selector range end " +
                            std::to_string(selector.end) +
                            " out of range for " + std::to_string(n) +
                            " rows");
        }
        std::vector<std::size_t> rows;
        for (std::size_t r = selector.begin; r < selector.end; ++r) {
          rows.push_back(r);
        }
        return rows;
      }
      case Selector::Kind::kList:
        return CheckedIndices(selector.list, n);
      case Selector::Kind::kPredicted:
        throw ConfigError(
            "failure mode defines its held-out block by range or list");
    }
    throw ConfigError("unreachable selector kind");
  });

  std::sort(test_rows.begin(), test_rows.end());
  std::vector<std::size_t> train_rows;
  {
    std::set<std::size_t> test_set(test_rows.begin(), test_rows.end());
    for (std::size_t r = 0; r < n; ++r) {
      if (!test_set.count(r)) train_rows.push_back(r);
    }
  }
  if (train_rows.empty() || test_rows.empty()) {
    throw ConfigError("failure-mode block leaves an empty side");
  }

  const Dataset train = full.SelectRows(train_rows);
  const Dataset test = full.SelectRows(test_rows);
  if (!full.HasTarget()) {
    throw ConfigError("failure mode needs a target column");
  }

  const std::unique_ptr<BlackBoxModel> model =
      WithStage("fit", [&] { return BuildModel(spec, train); });
  const FeatureMatrix background = WithStage("background", [&] {
    return ShuffleBackground(train.Features(), shuffle_seed);
  });

  const std::optional<std::string> designated = DesignatedClass(options);
  const LossFunction g_train(LabelSet(train.TargetNumeric(), options.loss),
                             designated);
  const LossFunction g_test(LabelSet(test.TargetNumeric(), options.loss),
                            designated);

  RunResult result;
  result.feature_names = full.Features().ColumnNames();
  result.outcomes.push_back(MakeOutcome("train", g_train, *model,
                                        train.Features(), background,
                                        options.engine));
  result.outcomes.push_back(MakeOutcome("test", g_test, *model,
                                        test.Features(), background,
                                        options.engine));
  BuildArtifacts(options, full, result);
  return result;
}

}  // namespace

ModelSpec ParseModelSpec(const std::string& text) {
  ModelSpec spec;
  const std::size_t colon = text.find(':');
  spec.kind = colon == std::string::npos ? text : text.substr(0, colon);
  if (spec.kind.empty()) {
    throw ConfigError("model spec is empty");
  }
  if (spec.kind == "external" || spec.kind == "external-concurrent") {
    if (colon == std::string::npos || colon + 1 >= text.size()) {
      throw ConfigError("model kind \"" + spec.kind + "\" needs a command");
    }
    spec.command = text.substr(colon + 1);
    return spec;
  }
  if (colon == std::string::npos) return spec;
  const std::string rest = text.substr(colon + 1);
  std::size_t start = 0;
  for (std::size_t i = 0; i <= rest.size(); ++i) {
    if (i == rest.size() || rest[i] == ',') {
      const std::string pair = rest.substr(start, i - start);
      start = i + 1;
      if (pair.empty()) continue;
      const std::size_t eq = pair.find('=');
      if (eq == std::string::npos || eq == 0) {
        throw ConfigError("model parameter \"" + pair +
                          "\" is not key=value");
      }
      spec.params[pair.substr(0, eq)] = pair.substr(eq + 1);
    }
  }
  return spec;
}

RunResult RunExplain(const RunOptions& options) {
  const ModelSpec spec = WithStage("config", [&] {
    return ParseModelSpec(options.model);
  });
  const Dataset full = WithStage("load", [&] {
    return LoadCsv(options.data_path, options.schema);
  });

  // One user-facing seed drives every stage; stages draw from distinct
  // derived seeds so their streams never overlap.
  std::uint64_t state = options.engine.seed;
  const std::uint64_t shuffle_seed = SplitMix64(state);
  const std::uint64_t select_seed = SplitMix64(state);
  const std::uint64_t split_seed = SplitMix64(state);

  if (options.mode == AnalysisMode::kFailure) {
    return RunFailureMode(options, full, spec, shuffle_seed);
  }

  const std::size_t n = full.Features().Rows();
  const TrainTestSplit split = WithStage("split", [&] {
    return SplitRows(n, options.test_fraction, split_seed);
  });
  const Dataset train = full.SelectRows(split.train_rows);

  const std::unique_ptr<BlackBoxModel> model =
      WithStage("fit", [&] { return BuildModel(spec, train); });
  const FeatureMatrix background = WithStage("background", [&] {
    return ShuffleBackground(train.Features(), shuffle_seed);
  });

  const Selector selector = WithStage("select", [&] {
    return ParseSelector(options.sample_select);
  });
  const std::vector<std::size_t> sample_rows = WithStage("select", [&] {
    return SelectSampleRows(selector, full, split.test_rows, *model,
                            select_seed);
  });
  const Dataset sample = full.SelectRows(sample_rows);

  const std::unique_ptr<GeneralizedFunction> g = WithStage("bind", [&]()
      -> std::unique_ptr<GeneralizedFunction> {
    switch (options.mode) {
      case AnalysisMode::kOutput:
        return std::make_unique<OutputFunction>(DesignatedClass(options));
      case AnalysisMode::kClassification: {
        if (options.positive_classes.empty() ||
            options.negative_classes.empty()) {
          throw ConfigError(
              "classification mode needs positive and negative classes");
        }
        const ModelOutput reference =
            model->Predict(sample.Features().SelectRows({0}));
        return std::make_unique<ClassificationFunction>(
            ClassPartition::FromNames(options.positive_classes,
                                      options.negative_classes, reference));
      }
      case AnalysisMode::kGroupDiff: {
        if (!sample.HasGroup()) {
          throw ConfigError("group-diff mode needs a group column");
        }
        return std::make_unique<IntergroupFunction>(
            GroupAssignment(sample.GroupBinary(), options.group_measure),
            DesignatedClass(options), options.group_use_probability);
      }
      case AnalysisMode::kFailure:
        break;
    }
    throw ConfigError("unhandled analysis mode");
  });

  RunResult result;
  result.feature_names = full.Features().ColumnNames();
  result.outcomes.push_back(MakeOutcome("sample", *g, *model,
                                        sample.Features(), background,
                                        options.engine));
  BuildArtifacts(options, full, result);
  return result;
}

}  // namespace gshap
