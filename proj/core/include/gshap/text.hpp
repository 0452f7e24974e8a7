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

#ifndef GSHAP_TEXT_HPP_
#define GSHAP_TEXT_HPP_

#include <string>
#include <string_view>
#include <vector>

namespace gshap {

// Shortest decimal string that round-trips the exact double value.
// All numeric text the library emits goes through this so that two runs
// with identical inputs produce byte-identical files.
std::string FormatDouble(double value);

// Strict double parse: the whole field must be consumed, and the result
// must be finite. Throws DataError with `context` in the message otherwise.
double ParseDouble(std::string_view field, const std::string& context);

// Splits one CSV record on commas. No quoting rules: fields in the formats
// this library reads and writes never contain commas. A trailing '\r' on
// the record (CRLF input) is dropped before splitting.
std::vector<std::string> SplitCsvLine(std::string_view line);

// Trims ASCII whitespace from both ends.
std::string_view TrimWhitespace(std::string_view text);

}  // namespace gshap

#endif  // GSHAP_TEXT_HPP_
