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

#ifndef GSHAP_ERROR_HPP_
#define GSHAP_ERROR_HPP_

#include <stdexcept>
#include <string>

namespace gshap {

// Base class of every error thrown by this library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Invalid configuration: bad hyperparameters, missing or inconsistent
// bindings, unsupported requests. Maps to CLI exit code 1.
class ConfigError : public Error {
 public:
  using Error::Error;
};

// Invalid input data: unreadable files, unparseable cells, NaN entries,
// shape or name mismatches. Maps to CLI exit code 2.
class DataError : public Error {
 public:
  using Error::Error;
};

// Failures while computing: degenerate probabilities or variances,
// divisions by zero, external-model protocol violations. Maps to CLI
// exit code 3.
class ComputeError : public Error {
 public:
  using Error::Error;
};

// Runs `fn`, prefixing any library error that escapes with "[stage] "
// while preserving the error's concrete type.
template <typename Fn>
auto WithStage(const char* stage, Fn&& fn) -> decltype(fn()) {
  try {
    return fn();
  } catch (const ConfigError& e) {
    throw ConfigError(std::string("[") + stage + "] " + e.what());
  } catch (const DataError& e) {
    throw DataError(std::string("[") + stage + "] " + e.what());
  } catch (const ComputeError& e) {
    throw ComputeError(std::string("[") + stage + "] " + e.what());
  }
}

}  // namespace gshap

#endif  // GSHAP_ERROR_HPP_
