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

#ifndef GSHAP_INGEST_HPP_
#define GSHAP_INGEST_HPP_

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "gshap/matrix.hpp"

namespace gshap {

// Column roles for CSV loading. feature_columns empty means every column
// that is not the target or group column is a feature. Role columns must
// exist in the header and must not overlap.
struct CsvSchema {
  std::vector<std::string> feature_columns;
  std::optional<std::string> target_column;
  std::optional<std::string> group_column;
};

// Loaded table: numeric features plus optional raw-text target and group
// columns aligned row for row with the features.
class Dataset {
 public:
  Dataset(FeatureMatrix features, std::vector<std::string> target,
          std::vector<std::string> group, std::string target_name,
          std::string group_name);

  const FeatureMatrix& Features() const { return features_; }

  bool HasTarget() const { return !target_.empty(); }
  bool HasGroup() const { return !group_.empty(); }

  const std::vector<std::string>& TargetRaw() const { return target_; }
  const std::vector<std::string>& GroupRaw() const { return group_; }
  const std::string& TargetName() const { return target_name_; }
  const std::string& GroupName() const { return group_name_; }

  // Target parsed as doubles; DataError on the first non-numeric value.
  std::vector<double> TargetNumeric() const;

  // Group column as 0/1. Literal "0"/"1" pass through; otherwise the
  // column must hold exactly two distinct values and the lexicographically
  // smaller one maps to 0.
  std::vector<int> GroupBinary() const;

  Dataset SelectRows(const std::vector<std::size_t>& rows) const;

 private:
  FeatureMatrix features_;
  std::vector<std::string> target_;
  std::vector<std::string> group_;
  std::string target_name_;
  std::string group_name_;
};

// Strict CSV reader: a header plus at least one data row, every record
// with the same field count, every feature field a finite number. Errors
// are DataError naming the 1-based row and the column.
Dataset LoadCsv(const std::string& path, const CsvSchema& schema);
Dataset LoadCsv(std::istream& input, const CsvSchema& schema,
                const std::string& origin);

// Writes features (and any target/group columns) back out; numeric text
// round-trips exactly.
void SaveCsv(const Dataset& dataset, std::ostream& out);

struct TrainTestSplit {
  std::vector<std::size_t> train_rows;
  std::vector<std::size_t> test_rows;
};

// Seeded shuffle of the row indices, last round(n * test_fraction) rows to
// the test side. Each side must be nonempty; ConfigError otherwise.
TrainTestSplit SplitRows(std::size_t n, double test_fraction,
                         std::uint64_t seed);

enum class ShuffleKind {
  // Shuffles each column independently: marginals survive, joint
  // structure and any feature-outcome relationship do not.
  kPerColumn,
  // Shuffles whole rows: only the row order changes.
  kRows,
};

FeatureMatrix ShuffleBackground(const FeatureMatrix& features,
                                std::uint64_t seed,
                                ShuffleKind kind = ShuffleKind::kPerColumn);

// Per-column z-scoring with parameters learned from training data only.
// A column whose population standard deviation is indistinguishable from
// zero is centered and left unscaled.
class Standardizer {
 public:
  Standardizer() = default;

  static Standardizer Fit(const FeatureMatrix& features);

  FeatureMatrix Transform(const FeatureMatrix& features) const;
  FeatureMatrix InverseTransform(const FeatureMatrix& features) const;

  const std::vector<double>& Means() const { return means_; }
  const std::vector<double>& Scales() const { return scales_; }

 private:
  std::vector<double> means_;
  std::vector<double> scales_;
};

}  // namespace gshap

#endif  // GSHAP_INGEST_HPP_
