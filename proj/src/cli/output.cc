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

#include "qbarcode/cli/output.h"

#include <charconv>
#include <cmath>
#include <istream>
#include <ostream>
#include <stdexcept>

#include "qbarcode/errors.h"

namespace qbarcode::cli {

namespace {

std::string csv_escape(const std::string &s) {
    if (s.find_first_of(",\"\n") == std::string::npos) {
        return s;
    }
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') {
            out += '"';
        }
        out += c;
    }
    return out + "\"";
}

std::string cell_text(const Cell &cell) {
    if (auto *i = std::get_if<int64_t>(&cell)) {
        return std::to_string(*i);
    }
    if (auto *d = std::get_if<double>(&cell)) {
        return std::isnan(*d) ? std::string() : format_double(*d);
    }
    if (auto *s = std::get_if<std::string>(&cell)) {
        return csv_escape(*s);
    }
    return {};
}

nlohmann::ordered_json cell_json(const Cell &cell) {
    if (auto *i = std::get_if<int64_t>(&cell)) {
        return *i;
    }
    if (auto *d = std::get_if<double>(&cell)) {
        if (std::isnan(*d)) {
            return nullptr;
        }
        if (std::isinf(*d)) {
            return *d > 0 ? "inf" : "-inf";
        }
        return *d;
    }
    if (auto *s = std::get_if<std::string>(&cell)) {
        return *s;
    }
    return nullptr;
}

std::vector<std::string> split_csv_line(const std::string &line) {
    std::vector<std::string> out;
    std::string cur;
    bool quoted = false;
    for (size_t i = 0; i < line.size(); i++) {
        char c = line[i];
        if (quoted) {
            if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
                cur += '"';
                i++;
            } else if (c == '"') {
                quoted = false;
            } else {
                cur += c;
            }
        } else if (c == '"') {
            quoted = true;
        } else if (c == ',') {
            out.push_back(std::move(cur));
            cur.clear();
        } else {
            cur += c;
        }
    }
    out.push_back(std::move(cur));
    return out;
}

}  // namespace

void Table::add_row(std::vector<Cell> row) {
    if (row.size() != columns.size()) {
        throw std::logic_error("table " + name + ": row has " + std::to_string(row.size()) + " cells, expected " +
                               std::to_string(columns.size()));
    }
    rows.push_back(std::move(row));
}

std::string format_double(double value) {
    if (std::isinf(value)) {
        return value > 0 ? "inf" : "-inf";
    }
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
    if (ec != std::errc()) {
        throw std::runtime_error("failed to format a double");
    }
    return std::string(buf, ptr);
}

void write_csv(std::ostream &out, const Document &doc) {
    out << "# schema: " << kSchemaVersion << "\n";
    out << "# command: " << doc.command << "\n";
    out << "# config: " << doc.config.dump() << "\n";
    for (const auto &w : doc.warnings) {
        out << "# warning: " << w << "\n";
    }
    for (size_t t = 0; t < doc.tables.size(); t++) {
        const auto &table = doc.tables[t];
        out << "\n# table: " << table.name << "\n";
        for (size_t c = 0; c < table.columns.size(); c++) {
            out << (c ? "," : "") << table.columns[c];
        }
        out << "\n";
        for (const auto &row : table.rows) {
            for (size_t c = 0; c < row.size(); c++) {
                out << (c ? "," : "") << cell_text(row[c]);
            }
            out << "\n";
        }
    }
}

void write_json(std::ostream &out, const Document &doc) {
    nlohmann::ordered_json j;
    j["schema"] = kSchemaVersion;
    j["command"] = doc.command;
    j["config"] = nlohmann::ordered_json::parse(doc.config.dump());
    j["warnings"] = doc.warnings;
    nlohmann::ordered_json tables = nlohmann::ordered_json::object();
    for (const auto &table : doc.tables) {
        nlohmann::ordered_json rows = nlohmann::ordered_json::array();
        for (const auto &row : table.rows) {
            nlohmann::ordered_json r = nlohmann::ordered_json::array();
            for (const auto &cell : row) {
                r.push_back(cell_json(cell));
            }
            rows.push_back(std::move(r));
        }
        tables[table.name] = {{"columns", table.columns}, {"rows", std::move(rows)}};
    }
    j["tables"] = std::move(tables);
    out << j.dump(2) << "\n";
}

size_t TextTable::column(std::string_view name) const {
    for (size_t i = 0; i < columns.size(); i++) {
        if (columns[i] == name) {
            return i;
        }
    }
    throw std::out_of_range("missing column '" + std::string(name) + "'");
}

TextTable read_csv_table(std::istream &in, std::string_view table, const std::string &path) {
    std::string marker = "# table: " + std::string(table);
    std::string line;
    uint64_t offset = 0;
    bool found = false;
    while (std::getline(in, line)) {
        offset += line.size() + 1;
        if (line == marker) {
            found = true;
            break;
        }
    }
    if (!found) {
        throw ParseError(path, offset, "no table named '" + std::string(table) + "'");
    }
    TextTable out;
    uint64_t header_offset = offset;
    if (!std::getline(in, line) || line.empty()) {
        throw ParseError(path, header_offset, "table '" + std::string(table) + "' has no header row");
    }
    offset += line.size() + 1;
    out.columns = split_csv_line(line);
    while (std::getline(in, line)) {
        uint64_t line_offset = offset;
        offset += line.size() + 1;
        if (line.empty() || line.starts_with("#")) {
            break;
        }
        auto cells = split_csv_line(line);
        if (cells.size() != out.columns.size()) {
            throw ParseError(path, line_offset,
                             "row has " + std::to_string(cells.size()) + " cells, header has " +
                                 std::to_string(out.columns.size()));
        }
        out.rows.push_back(std::move(cells));
    }
    return out;
}

TextTable read_json_table(std::istream &in, std::string_view table, const std::string &path) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(in);
    } catch (const nlohmann::json::parse_error &e) {
        throw ParseError(path, e.byte, e.what());
    }
    if (!j.contains("tables") || !j["tables"].contains(std::string(table))) {
        throw ParseError(path, 0, "no table named '" + std::string(table) + "'");
    }
    const auto &t = j["tables"][std::string(table)];
    TextTable out;
    for (const auto &c : t.at("columns")) {
        out.columns.push_back(c.get<std::string>());
    }
    for (const auto &row : t.at("rows")) {
        std::vector<std::string> cells;
        for (const auto &cell : row) {
            if (cell.is_null()) {
                cells.emplace_back();
            } else if (cell.is_string()) {
                cells.push_back(cell.get<std::string>());
            } else if (cell.is_number_float()) {
                cells.push_back(format_double(cell.get<double>()));
            } else {
                cells.push_back(cell.dump());
            }
        }
        out.rows.push_back(std::move(cells));
    }
    return out;
}

}  // namespace qbarcode::cli
