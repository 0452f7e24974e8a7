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

#ifndef GSHAP_EXTERNAL_MODEL_HPP_
#define GSHAP_EXTERNAL_MODEL_HPP_

#include <memory>
#include <string>

#include "gshap/matrix.hpp"
#include "gshap/model.hpp"

namespace gshap {

// Adapter that treats a child process as a model. Each Predict call writes
// one request to the child's stdin and reads one response from its stdout:
//
//   request:  one CSV line of feature names, then one CSV line of values
//             per row, then a blank line.
//   response: scalar models answer one line per row holding one float.
//             Probabilistic models answer one CSV line of class labels
//             followed by one CSV line of per-class probabilities per row.
//
// The response kind is detected from its first line: a single field that
// parses as a float means scalar. Child exit, malformed output, and
// probability rows that fail validation all surface as ComputeError with
// the child's stderr attached when available.
//
// A default-constructed adapter holds one child and serializes calls.
// With concurrent_safe the adapter keeps a pool of children, one handed
// to each concurrent Predict, so the engines may parallelize over it.
class ExternalModel : public BlackBoxModel {
 public:
  explicit ExternalModel(std::string command, bool concurrent_safe = false);
  ~ExternalModel() override;

  ModelOutput Predict(const FeatureMatrix& features) const override;
  bool ConcurrentSafe() const override;

  const std::string& Command() const { return command_; }

 private:
  struct Pool;

  std::string command_;
  bool concurrent_safe_ = false;
  std::shared_ptr<Pool> pool_;
};

}  // namespace gshap

#endif  // GSHAP_EXTERNAL_MODEL_HPP_
