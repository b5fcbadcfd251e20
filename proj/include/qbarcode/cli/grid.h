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

#ifndef QBARCODE_CLI_GRID_H_
#define QBARCODE_CLI_GRID_H_

#include <stdexcept>
#include <string_view>
#include <vector>

namespace qbarcode::cli {

/// Bad flags or config values. Maps to exit code 2.
class UsageError : public std::invalid_argument {
   public:
    using std::invalid_argument::invalid_argument;
};

/// Parses "a,b,c", "lin:start:stop:count" or "log:start:stop:count".
/// `field` names the flag in error messages.
std::vector<double> parse_grid(std::string_view text, std::string_view field);
std::vector<int64_t> parse_integer_grid(std::string_view text, std::string_view field);

double parse_double(std::string_view text, std::string_view field);
int64_t parse_integer(std::string_view text, std::string_view field);

}  // namespace qbarcode::cli

#endif  // QBARCODE_CLI_GRID_H_
