// Copyright 2026 The switchsim Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace switchsim::csv {

/// Minimal comma-separated reader: no quoting, blank lines and lines starting
/// with '#' are skipped, surrounding whitespace is trimmed. The first row must
/// equal `header` exactly; each data row must have header.size() fields.
/// Errors throw std::runtime_error with the 1-based line number.
struct Row {
    std::size_t line;
    std::vector<std::string> fields;
};
std::vector<Row> read(std::istream &in, const std::vector<std::string> &header);

double to_double(const Row &row, std::size_t column);
long long to_int(const Row &row, std::size_t column);

/// Shortest round-trippable decimal form.
std::string format(double value);
std::string join(const std::vector<std::string> &fields);

}  // namespace switchsim::csv
