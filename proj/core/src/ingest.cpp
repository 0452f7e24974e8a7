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

#include "gshap/ingest.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "gshap/error.hpp"
#include "gshap/rng.hpp"
#include "gshap/text.hpp"

namespace gshap {

Dataset::Dataset(FeatureMatrix features, std::vector<std::string> target,
                 std::vector<std::string> group, std::string target_name,
                 std::string group_name)
    : features_(std::move(features)), target_(std::move(target)),
      group_(std::move(group)), target_name_(std::move(target_name)),
      group_name_(std::move(group_name)) {
  if (!target_.empty() && target_.size() != features_.Rows()) {
    throw DataError("target column covers " + std::to_string(target_.size()) +
                    " rows, features have " +
                    std::to_string(features_.Rows()));
  }
  if (!group_.empty() && group_.size() != features_.Rows()) {
    throw DataError("group column covers " + std::to_string(group_.size()) +
                    " rows, features have " +
                    std::to_string(features_.Rows()));
  }
}

std::vector<double> Dataset::TargetNumeric() const {
  if (!HasTarget()) throw ConfigError("dataset has no target column");
  std::vector<double> values(target_.size());
  for (std::size_t r = 0; r < target_.size(); ++r) {
    values[r] = ParseDouble(target_[r], "target column \"" + target_name_ +
                                            "\", row " + std::to_string(r + 1));
  }
  return values;
}

std::vector<int> Dataset::GroupBinary() const {
  if (!HasGroup()) throw ConfigError("dataset has no group column");
  bool literal = true;
  for (const std::string& v : group_) {
    if (v != "0" && v != "1") {
      literal = false;
      break;
    }
  }
  std::vector<int> out(group_.size());
  if (literal) {
    for (std::size_t r = 0; r < group_.size(); ++r) {
      out[r] = group_[r] == "1" ? 1 : 0;
    }
    return out;
  }
  std::set<std::string> distinct(group_.begin(), group_.end());
  if (distinct.size() != 2) {
    throw DataError("group column \"" + group_name_ + "\" has " +
                    std::to_string(distinct.size()) +
                    " distinct values, expected 2");
  }
  const std::string& zero = *distinct.begin();
  for (std::size_t r = 0; r < group_.size(); ++r) {
    out[r] = group_[r] == zero ? 0 : 1;
  }
  return out;
}

Dataset Dataset::SelectRows(const std::vector<std::size_t>& rows) const {
  std::vector<std::string> target, group;
  if (HasTarget()) {
    target.reserve(rows.size());
    for (const std::size_t r : rows) target.push_back(target_[r]);
  }
  if (HasGroup()) {
    group.reserve(rows.size());
    for (const std::size_t r : rows) group.push_back(group_[r]);
  }
  return Dataset(features_.SelectRows(rows), std::move(target),
                 std::move(group), target_name_, group_name_);
}

namespace {

std::size_t FindColumn(const std::vector<std::string>& header,
                       const std::string& name, const std::string& origin) {
  for (std::size_t c = 0; c < header.size(); ++c) {
    if (header[c] == name) return c;
  }
  throw DataError(origin + ": column \"" + name + "\" not found");
}

}  // namespace

Dataset LoadCsv(const std::string& path, const CsvSchema& schema) {
  std::ifstream input(path);
  if (!input) {
    throw DataError("cannot open \"" + path + "\"");
  }
  return LoadCsv(input, schema, path);
}

Dataset LoadCsv(std::istream& input, const CsvSchema& schema,
                const std::string& origin) {
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(input, line)) lines.push_back(line);
  while (!lines.empty() && TrimWhitespace(lines.back()).empty()) {
    lines.pop_back();
  }
  if (lines.size() < 2) {
    throw DataError(origin + ": need a header and at least one data row");
  }

  std::vector<std::string> header = SplitCsvLine(lines[0]);
  for (std::string& h : header) h = std::string(TrimWhitespace(h));

  std::optional<std::size_t> target_col;
  std::optional<std::size_t> group_col;
  if (schema.target_column) {
    target_col = FindColumn(header, *schema.target_column, origin);
  }
  if (schema.group_column) {
    group_col = FindColumn(header, *schema.group_column, origin);
    if (target_col && *group_col == *target_col) {
      throw DataError(origin + ": target and group both bound to column \"" +
                      header[*target_col] + "\"");
    }
  }

  std::vector<std::size_t> feature_cols;
  if (schema.feature_columns.empty()) {
    for (std::size_t c = 0; c < header.size(); ++c) {
      if (target_col && c == *target_col) continue;
      if (group_col && c == *group_col) continue;
      feature_cols.push_back(c);
    }
  } else {
    for (const std::string& name : schema.feature_columns) {
      const std::size_t c = FindColumn(header, name, origin);
      if ((target_col && c == *target_col) || (group_col && c == *group_col)) {
        throw DataError(origin + ": column \"" + name +
                        "\" declared both feature and role column");
      }
      feature_cols.push_back(c);
    }
  }
  if (feature_cols.empty()) {
    throw DataError(origin + ": no feature columns remain");
  }

  const std::size_t n = lines.size() - 1;
  std::vector<double> values;
  values.reserve(n * feature_cols.size());
  std::vector<std::string> target, group;
  if (target_col) target.reserve(n);
  if (group_col) group.reserve(n);

  for (std::size_t r = 0; r < n; ++r) {
    const std::vector<std::string> fields = SplitCsvLine(lines[r + 1]);
    if (fields.size() != header.size()) {
      throw DataError(origin + ": row " + std::to_string(r + 2) + " has " +
                      std::to_string(fields.size()) + " fields, expected " +
                      std::to_string(header.size()));
    }
    for (const std::size_t c : feature_cols) {
      values.push_back(ParseDouble(
          fields[c], origin + ": row " + std::to_string(r + 2) +
                         ", column \"" + header[c] + "\""));
    }
    if (target_col) {
      target.push_back(std::string(TrimWhitespace(fields[*target_col])));
    }
    if (group_col) {
      group.push_back(std::string(TrimWhitespace(fields[*group_col])));
    }
  }

  std::vector<std::string> feature_names;
  feature_names.reserve(feature_cols.size());
  for (const std::size_t c : feature_cols) feature_names.push_back(header[c]);

  return Dataset(
      FeatureMatrix(std::move(values), n, std::move(feature_names)),
      std::move(target), std::move(group),
      target_col ? header[*target_col] : std::string(),
      group_col ? header[*group_col] : std::string());
}

void SaveCsv(const Dataset& dataset, std::ostream& out) {
  const FeatureMatrix& features = dataset.Features();
  for (std::size_t c = 0; c < features.Cols(); ++c) {
    if (c) out << ',';
    out << features.ColumnNames()[c];
  }
  if (dataset.HasTarget()) out << ',' << dataset.TargetName();
  if (dataset.HasGroup()) out << ',' << dataset.GroupName();
  out << '\n';
  for (std::size_t r = 0; r < features.Rows(); ++r) {
    for (std::size_t c = 0; c < features.Cols(); ++c) {
      if (c) out << ',';
      out << FormatDouble(features.At(r, c));
    }
    if (dataset.HasTarget()) out << ',' << dataset.TargetRaw()[r];
    if (dataset.HasGroup()) out << ',' << dataset.GroupRaw()[r];
    out << '\n';
  }
}

TrainTestSplit SplitRows(std::size_t n, double test_fraction,
                         std::uint64_t seed) {
  if (!(test_fraction > 0.0 && test_fraction < 1.0)) {
    throw ConfigError("test fraction must be in (0, 1)");
  }
  const std::size_t test_n = static_cast<std::size_t>(
      std::llround(static_cast<double>(n) * test_fraction));
  if (test_n == 0 || test_n >= n) {
    throw ConfigError("split of " + std::to_string(n) + " rows at fraction " +
                      FormatDouble(test_fraction) + " leaves an empty side");
  }
  std::vector<std::size_t> order(n);
  for (std::size_t i = 0; i < n; ++i) order[i] = i;
  std::mt19937_64 rng = SubStream(seed, 0);
  FisherYatesShuffle(order, rng);

  TrainTestSplit split;
  split.train_rows.assign(order.begin(), order.end() - test_n);
  split.test_rows.assign(order.end() - test_n, order.end());
  std::sort(split.train_rows.begin(), split.train_rows.end());
  std::sort(split.test_rows.begin(), split.test_rows.end());
  return split;
}

FeatureMatrix ShuffleBackground(const FeatureMatrix& features,
                                std::uint64_t seed, ShuffleKind kind) {
  if (kind == ShuffleKind::kRows) {
    std::vector<std::size_t> order(features.Rows());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::mt19937_64 rng = SubStream(seed, 0);
    FisherYatesShuffle(order, rng);
    return features.SelectRows(order);
  }
  std::vector<double> values(features.Rows() * features.Cols());
  for (std::size_t c = 0; c < features.Cols(); ++c) {
    std::vector<double> column = features.Column(c);
    std::mt19937_64 rng = SubStream(seed, c + 1);
    FisherYatesShuffle(column, rng);
    for (std::size_t r = 0; r < features.Rows(); ++r) {
      values[r * features.Cols() + c] = column[r];
    }
  }
  return FeatureMatrix::WithSameSchema(features, std::move(values),
                                       features.Rows());
}

Standardizer Standardizer::Fit(const FeatureMatrix& features) {
  Standardizer out;
  const std::size_t n = features.Rows();
  const std::size_t p = features.Cols();
  out.means_.assign(p, 0.0);
  out.scales_.assign(p, 1.0);
  for (std::size_t c = 0; c < p; ++c) {
    double sum = 0.0;
    for (std::size_t r = 0; r < n; ++r) sum += features.At(r, c);
    const double mean = sum / static_cast<double>(n);
    double ss = 0.0;
    for (std::size_t r = 0; r < n; ++r) {
      const double d = features.At(r, c) - mean;
      ss += d * d;
    }
    const double sd = std::sqrt(ss / static_cast<double>(n));
    out.means_[c] = mean;
    // A spread this small is noise around a constant column; scaling by it
    // would blow the column up instead of normalizing it.
    out.scales_[c] = sd <= 1e-12 * std::max(1.0, std::abs(mean)) ? 1.0 : sd;
  }
  return out;
}

FeatureMatrix Standardizer::Transform(const FeatureMatrix& features) const {
  if (features.Cols() != means_.size()) {
    throw DataError("standardizer fit on " + std::to_string(means_.size()) +
                    " columns, applied to " + std::to_string(features.Cols()));
  }
  std::vector<double> values(features.Rows() * features.Cols());
  for (std::size_t r = 0; r < features.Rows(); ++r) {
    for (std::size_t c = 0; c < features.Cols(); ++c) {
      values[r * features.Cols() + c] =
          (features.At(r, c) - means_[c]) / scales_[c];
    }
  }
  return FeatureMatrix::WithSameSchema(features, std::move(values),
                                       features.Rows());
}

FeatureMatrix Standardizer::InverseTransform(
    const FeatureMatrix& features) const {
  if (features.Cols() != means_.size()) {
    throw DataError("standardizer fit on " + std::to_string(means_.size()) +
                    " columns, applied to " + std::to_string(features.Cols()));
  }
  std::vector<double> values(features.Rows() * features.Cols());
  for (std::size_t r = 0; r < features.Rows(); ++r) {
    for (std::size_t c = 0; c < features.Cols(); ++c) {
      values[r * features.Cols() + c] =
          features.At(r, c) * scales_[c] + means_[c];
    }
  }
  return FeatureMatrix::WithSameSchema(features, std::move(values),
                                       features.Rows());
}

}  // namespace gshap
