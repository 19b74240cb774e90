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

#include "switchsim/csv.h"

#include <charconv>
#include <istream>
#include <sstream>
#include <stdexcept>

namespace switchsim::csv {

namespace {

std::string trim(std::string_view s) {
    size_t b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) {
        return {};
    }
    size_t e = s.find_last_not_of(" \t\r");
    return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> split(const std::string &line) {
    std::vector<std::string> out;
    std::string_view rest = line;
    while (true) {
        size_t p = rest.find(',');
        out.push_back(trim(rest.substr(0, p)));
        if (p == std::string_view::npos) {
            break;
        }
        rest.remove_prefix(p + 1);
    }
    return out;
}

[[noreturn]] void fail(std::size_t line, const std::string &msg) {
    throw std::runtime_error("csv line " + std::to_string(line) + ": " + msg);
}

}  // namespace

std::vector<Row> read(std::istream &in, const std::vector<std::string> &header) {
    std::vector<Row> rows;
    std::string line;
    std::size_t lineno = 0;
    bool seen_header = false;
    while (std::getline(in, line)) {
        ++lineno;
        std::string t = trim(line);
        if (t.empty() || t[0] == '#') {
            continue;
        }
        auto fields = split(t);
        if (!seen_header) {
            if (fields != header) {
                fail(lineno, "unexpected header '" + t + "', expected '" + join(header) + "'");
            }
            seen_header = true;
            continue;
        }
        if (fields.size() != header.size()) {
            fail(lineno, "expected " + std::to_string(header.size()) + " fields, got " + std::to_string(fields.size()));
        }
        rows.push_back({lineno, std::move(fields)});
    }
    if (!seen_header) {
        throw std::runtime_error("csv: missing header '" + join(header) + "'");
    }
    return rows;
}

double to_double(const Row &row, std::size_t column) {
    const std::string &s = row.fields.at(column);
    try {
        size_t used = 0;
        double v = std::stod(s, &used);
        if (used != s.size()) {
            fail(row.line, "trailing characters in number '" + s + "'");
        }
        return v;
    } catch (const std::logic_error &) {
        fail(row.line, "column " + std::to_string(column + 1) + ": not a number '" + s + "'");
    }
}

long long to_int(const Row &row, std::size_t column) {
    const std::string &s = row.fields.at(column);
    long long v = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size()) {
        fail(row.line, "column " + std::to_string(column + 1) + ": not an integer '" + s + "'");
    }
    return v;
}

std::string format(double value) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
    if (ec != std::errc()) {
        throw std::runtime_error("csv: cannot format number");
    }
    return std::string(buf, ptr);
}

std::string join(const std::vector<std::string> &fields) {
    std::string out;
    for (size_t k = 0; k < fields.size(); ++k) {
        if (k) {
            out += ',';
        }
        out += fields[k];
    }
    return out;
}

}  // namespace switchsim::csv
