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

#include "gshap/text.hpp"

#include <charconv>
#include <cmath>
#include <system_error>

#include "gshap/error.hpp"

namespace gshap {

std::string FormatDouble(double value) {
  char buffer[64];
  const auto result =
      std::to_chars(buffer, buffer + sizeof(buffer), value);
  return std::string(buffer, result.ptr);
}

double ParseDouble(std::string_view field, const std::string& context) {
  const std::string_view trimmed = TrimWhitespace(field);
  if (trimmed.empty()) {
    throw DataError(context + ": empty numeric field");
  }
  double value = 0.0;
  const char* first = trimmed.data();
  const char* last = trimmed.data() + trimmed.size();
  const auto result = std::from_chars(first, last, value);
  if (result.ec != std::errc() || result.ptr != last) {
    throw DataError(context + ": not a number: \"" + std::string(field) +
                    "\"");
  }
  if (!std::isfinite(value)) {
    throw DataError(context + ": non-finite value: \"" + std::string(field) +
                    "\"");
  }
  return value;
}

std::vector<std::string> SplitCsvLine(std::string_view line) {
  if (!line.empty() && line.back() == '\r') {
    line.remove_suffix(1);
  }
  std::vector<std::string> fields;
  std::size_t start = 0;
  for (std::size_t i = 0; i <= line.size(); ++i) {
    if (i == line.size() || line[i] == ',') {
      fields.emplace_back(line.substr(start, i - start));
      start = i + 1;
    }
  }
  return fields;
}

std::string_view TrimWhitespace(std::string_view text) {
  const char* ws = " \t\r\n\f\v";
  const std::size_t begin = text.find_first_not_of(ws);
  if (begin == std::string_view::npos) return std::string_view();
  const std::size_t end = text.find_last_not_of(ws);
  return text.substr(begin, end - begin + 1);
}

}  // namespace gshap
