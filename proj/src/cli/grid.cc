// Copyright 2026 The qbarcode Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "qbarcode/cli/grid.h"

#include <charconv>
#include <cmath>
#include <string>

namespace qbarcode::cli {

namespace {

std::vector<std::string_view> split(std::string_view text, char sep) {
    std::vector<std::string_view> out;
    size_t start = 0;
    while (true) {
        size_t pos = text.find(sep, start);
        out.push_back(text.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
        if (pos == std::string_view::npos) {
            return out;
        }
        start = pos + 1;
    }
}

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) {
        s.remove_prefix(1);
    }
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) {
        s.remove_suffix(1);
    }
    return s;
}

[[noreturn]] void fail(std::string_view field, std::string_view text, std::string_view why) {
    throw UsageError("--" + std::string(field) + ": " + std::string(why) + " (got '" + std::string(text) + "')");
}

}  // namespace

double parse_double(std::string_view text, std::string_view field) {
    auto t = trim(text);
    double value = 0;
    auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), value);
    if (t.empty() || ec != std::errc() || ptr != t.data() + t.size() || !std::isfinite(value)) {
        fail(field, text, "expected a number");
    }
    return value;
}

int64_t parse_integer(std::string_view text, std::string_view field) {
    auto t = trim(text);
    int64_t value = 0;
    auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), value);
    if (t.empty() || ec != std::errc() || ptr != t.data() + t.size()) {
        fail(field, text, "expected an integer");
    }
    return value;
}

std::vector<double> parse_grid(std::string_view text, std::string_view field) {
    auto t = trim(text);
    if (t.starts_with("lin:") || t.starts_with("log:")) {
        auto parts = split(t, ':');
        if (parts.size() != 4) {
            fail(field, text, "range grids are kind:start:stop:count");
        }
        double a = parse_double(parts[1], field);
        double b = parse_double(parts[2], field);
        int64_t n = parse_integer(parts[3], field);
        if (n < 1) {
            fail(field, text, "range grids need a positive count");
        }
        bool log_spaced = parts[0] == "log";
        if (log_spaced && !(a > 0 && b > 0)) {
            fail(field, text, "log grids need positive endpoints");
        }
        std::vector<double> out;
        for (int64_t i = 0; i < n; i++) {
            double s = n == 1 ? 0.0 : double(i) / double(n - 1);
            double v = log_spaced ? std::exp(std::log(a) + s * (std::log(b) - std::log(a))) : a + s * (b - a);
            // Pin the endpoints so that e.g. lin:0:0.5:11 ends at exactly 0.5.
            if (i == 0) {
                v = a;
            } else if (i == n - 1) {
                v = b;
            }
            out.push_back(v);
        }
        return out;
    }
    std::vector<double> out;
    for (auto piece : split(t, ',')) {
        out.push_back(parse_double(piece, field));
    }
    return out;
}

std::vector<int64_t> parse_integer_grid(std::string_view text, std::string_view field) {
    std::vector<int64_t> out;
    for (double v : parse_grid(text, field)) {
        double r = std::round(v);
        if (std::abs(v - r) > 1e-9 * std::max(1.0, std::abs(v))) {
            fail(field, text, "expected integer grid values");
        }
        out.push_back(int64_t(r));
    }
    return out;
}

}  // namespace qbarcode::cli
