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

#ifndef QBARCODE_CLI_OUTPUT_H_
#define QBARCODE_CLI_OUTPUT_H_

#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "json.hpp"

namespace qbarcode::cli {

inline constexpr std::string_view kSchemaVersion = "qbarcode-output/1";

/// Empty, integer, real or text. NaN reals are written as empty/null.
using Cell = std::variant<std::monostate, int64_t, double, std::string>;

struct Table {
    std::string name;
    std::vector<std::string> columns;
    std::vector<std::vector<Cell>> rows;

    void add_row(std::vector<Cell> row);
};

struct Document {
    std::string command;
    nlohmann::json config;
    std::vector<std::string> warnings;
    std::vector<Table> tables;
};

/// Shortest decimal text that parses back to the same double.
std::string format_double(double value);

/// Metadata as '# key: value' lines, then each table as '# table: name',
/// a header row and data rows, tables separated by blank lines.
void write_csv(std::ostream &out, const Document &doc);
void write_json(std::ostream &out, const Document &doc);

struct TextTable {
    std::vector<std::string> columns;
    std::vector<std::vector<std::string>> rows;

    /// Index of a column; throws std::out_of_range when absent.
    size_t column(std::string_view name) const;
};

/// Reads the named table back from a CSV document written by write_csv.
/// Throws ParseError with the byte offset of the offending line.
TextTable read_csv_table(std::istream &in, std::string_view table, const std::string &path);
/// Same, from a JSON document written by write_json.
TextTable read_json_table(std::istream &in, std::string_view table, const std::string &path);

}  // namespace qbarcode::cli

#endif  // QBARCODE_CLI_OUTPUT_H_
