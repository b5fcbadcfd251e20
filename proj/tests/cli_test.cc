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

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "gtest/gtest.h"
#include "qbarcode/cli/commands.h"
#include "qbarcode/cli/grid.h"
#include "qbarcode/cli/output.h"
#include "test_data.h"

using namespace qbarcode;
using namespace qbarcode::cli;

namespace {

struct CliRun {
    int code;
    std::string out;
    std::string err;
};

CliRun run(std::vector<std::string> args) {
    args.insert(args.begin(), "qbarcode");
    std::vector<char *> argv;
    for (auto &a : args) {
        argv.push_back(a.data());
    }
    std::ostringstream out, err;
    int code = run_cli(int(argv.size()), argv.data(), out, err);
    return {code, out.str(), err.str()};
}

TextTable csv_table(const std::string &text, std::string_view name) {
    std::istringstream in(text);
    return read_csv_table(in, name, "<memory>");
}

TextTable json_table(const std::string &text, std::string_view name) {
    std::istringstream in(text);
    return read_json_table(in, name, "<memory>");
}

double cell(const TextTable &t, size_t row, std::string_view column) {
    return std::stod(t.rows.at(row).at(t.column(column)));
}

std::string write_file(const std::string &path, const std::string &content) {
    std::ofstream(path) << content;
    return path;
}

std::string synthetic_mnist_dir() {
    static std::string dir = [] {
        auto d = fixtures::make_temp_dir("cli_mnist");
        fixtures::write_synthetic_mnist(d, 300, 60, 17);
        return d;
    }();
    return dir;
}

}  // namespace

TEST(cli_grid, parse_grid) {
    EXPECT_EQ(parse_grid("0.1,0.2, 3", "g"), (std::vector<double>{0.1, 0.2, 3}));
    auto lin = parse_grid("lin:0:0.5:11", "g");
    ASSERT_EQ(lin.size(), 11u);
    EXPECT_EQ(lin.front(), 0);
    EXPECT_EQ(lin.back(), 0.5);
    EXPECT_NEAR(lin[3], 0.15, 1e-15);
    auto lg = parse_grid("log:1:1000:4", "g");
    ASSERT_EQ(lg.size(), 4u);
    EXPECT_EQ(lg.back(), 1000);
    EXPECT_NEAR(lg[1], 10, 1e-12);
    EXPECT_EQ(parse_grid("lin:2:2:1", "g"), std::vector<double>{2});
    EXPECT_THROW(parse_grid("", "g"), UsageError);
    EXPECT_THROW(parse_grid("1,,2", "g"), UsageError);
    EXPECT_THROW(parse_grid("log:0:1:3", "g"), UsageError);
    EXPECT_THROW(parse_grid("lin:0:1:0", "g"), UsageError);
    EXPECT_THROW(parse_grid("lin:0:1", "g"), UsageError);
    EXPECT_EQ(parse_integer_grid("1,5,10", "g"), (std::vector<int64_t>{1, 5, 10}));
    EXPECT_THROW(parse_integer_grid("1.5", "g"), UsageError);
    try {
        parse_double("abc", "eta-b");
        FAIL();
    } catch (const UsageError &e) {
        EXPECT_NE(std::string(e.what()).find("eta-b"), std::string::npos);
    }
}

TEST(cli_output, format_double_round_trips) {
    for (double v : {0.1, 1.0 / 3, 1e-300, 6.02e23, -2.5, 0.0}) {
        EXPECT_EQ(std::stod(format_double(v)), v);
    }
    EXPECT_EQ(format_double(INFINITY), "inf");
    EXPECT_EQ(format_double(-INFINITY), "-inf");
}

TEST(cli_output, csv_and_json_agree) {
    for (std::vector<std::string> args : {std::vector<std::string>{"fidelity", "--n-signal", "0.01,0.1,1", "--probes", "1,10"},
                                          std::vector<std::string>{"bounds", "--n-pixels", "6", "--probes", "1,3"},
                                          std::vector<std::string>{"advantage-map", "--resolution", "5",
                                                                   "--slice-resolution", "7"}}) {
        auto csv = run(args);
        args.push_back("--format");
        args.push_back("json");
        auto json = run(args);
        ASSERT_EQ(csv.code, 0) << csv.err;
        ASSERT_EQ(json.code, 0) << json.err;
        auto doc = nlohmann::json::parse(json.out);
        EXPECT_EQ(doc["schema"], std::string(kSchemaVersion));
        EXPECT_EQ(doc["command"], args[0]);
        for (const auto &[name, unused] : doc["tables"].items()) {
            auto a = csv_table(csv.out, name);
            auto b = json_table(json.out, name);
            EXPECT_EQ(a.columns, b.columns);
            ASSERT_EQ(a.rows.size(), b.rows.size());
            for (size_t r = 0; r < a.rows.size(); r++) {
                for (size_t c = 0; c < a.columns.size(); c++) {
                    const auto &x = a.rows[r][c];
                    const auto &y = b.rows[r][c];
                    if (x == y) {
                        continue;
                    }
                    EXPECT_EQ(std::stod(x), std::stod(y)) << name << " " << a.columns[c];
                }
            }
        }
    }
}

TEST(cli_commands, fidelity_values) {
    auto r = run({"fidelity", "--n-signal", "0.1,1"});
    ASSERT_EQ(r.code, 0) << r.err;
    auto t = csv_table(r.out, "fidelity");
    ASSERT_EQ(t.rows.size(), 2u);
    double dq = 1 - std::sqrt(0.1 * 0.05) - std::sqrt(0.9 * 0.95);
    double dc = std::pow(std::sqrt(0.9) - std::sqrt(0.95), 2) / 2;
    EXPECT_NEAR(cell(t, 0, "delta_q"), dq, 1e-15);
    EXPECT_NEAR(cell(t, 1, "fidelity_quantum"), 1 / (1 + dq), 1e-12);
    EXPECT_NEAR(cell(t, 1, "fidelity_classical"), std::exp(-dc), 1e-12);
}

TEST(cli_commands, bounds_golden_toy) {
    auto r = run({"bounds", "--mode", "kcpf", "--n-pixels", "4", "--k-whites", "2", "--fidelity", "1,0.5",
                  "--probes", "1"});
    ASSERT_EQ(r.code, 0) << r.err;
    auto t = csv_table(r.out, "kcpf_bounds");
    ASSERT_EQ(t.rows.size(), 2u);
    EXPECT_EQ(cell(t, 0, "pairwise_sum"), 5);
    EXPECT_EQ(cell(t, 1, "pairwise_sum"), 1.0625);

    auto b = run({"bounds", "--n-pixels", "3", "--fidelity", "0.5", "--probes", "2"});
    ASSERT_EQ(b.code, 0) << b.err;
    auto bt = csv_table(b.out, "barcode_bounds");
    EXPECT_NEAR(cell(bt, 0, "pairwise_sum"), std::pow(1.5, 3) - 1, 1e-12);
    EXPECT_NEAR(cell(bt, 0, "simplified_upper"), 3 * std::pow(0.5, 2) / 2, 1e-12);
    EXPECT_NEAR(cell(bt, 0, "simplified_lower"), 3 * std::pow(0.5, 4) / 16, 1e-12);
}

TEST(cli_commands, exit_codes) {
    EXPECT_EQ(run({}).code, kExitUsage);
    EXPECT_EQ(run({"bogus"}).code, kExitUsage);
    EXPECT_EQ(run({"fidelity", "--no-such-flag", "1"}).code, kExitUsage);
    EXPECT_EQ(run({"fidelity", "--n-signal", "x"}).code, kExitUsage);
    EXPECT_EQ(run({"fidelity", "--eta-b", "1.5"}).code, kExitUsage);
    EXPECT_EQ(run({"fidelity", "--format", "xml"}).code, kExitUsage);
    EXPECT_EQ(run({"bounds", "--fidelity", "1.5"}).code, kExitDomain);
    EXPECT_EQ(run({"fidelity", "--config", "/nonexistent/config.json"}).code, kExitData);
    EXPECT_EQ(run({"fidelity", "--help"}).code, kExitOk);

    auto empty = fixtures::make_temp_dir("cli_empty");
    auto missing = run({"dataset-stats", "--dataset-dir", empty});
    EXPECT_EQ(missing.code, kExitData);
    EXPECT_NE(missing.err.find("MNIST"), std::string::npos) << missing.err;
}

TEST(cli_commands, config_file_and_flag_precedence) {
    auto dir = fixtures::make_temp_dir("cli_config");
    auto cfg = write_file(dir + "/c.json", R"({"n_signal": [0.5, 2], "probes": 3, "threads": 2})");
    auto r = run({"fidelity", "--config", cfg, "--format", "json"});
    ASSERT_EQ(r.code, 0) << r.err;
    auto doc = nlohmann::json::parse(r.out);
    EXPECT_EQ(doc["config"]["n-signal"], "0.5,2");
    EXPECT_EQ(doc["config"]["probes"], "3");
    EXPECT_FALSE(doc["config"].contains("threads"));
    EXPECT_EQ(json_table(r.out, "fidelity").rows.size(), 2u);

    auto over = run({"fidelity", "--config", cfg, "--probes", "7"});
    ASSERT_EQ(over.code, 0);
    EXPECT_EQ(cell(csv_table(over.out, "fidelity"), 0, "probes"), 7);

    auto bad = write_file(dir + "/bad.json", R"({"no_such_option": 1})");
    EXPECT_EQ(run({"fidelity", "--config", bad}).code, kExitUsage);
    auto broken = write_file(dir + "/broken.json", "{");
    EXPECT_EQ(run({"fidelity", "--config", broken}).code, kExitData);
}

TEST(cli_commands, out_file_matches_stdout) {
    auto dir = fixtures::make_temp_dir("cli_out");
    auto a = run({"advantage-map", "--resolution", "3", "--slice-resolution", "3"});
    auto b = run({"advantage-map", "--resolution", "3", "--slice-resolution", "3", "--out", dir + "/m.csv"});
    ASSERT_EQ(b.code, 0);
    EXPECT_TRUE(b.out.empty());
    std::ifstream in(dir + "/m.csv");
    std::stringstream buf;
    buf << in.rdbuf();
    EXPECT_EQ(buf.str(), a.out);
}

TEST(cli_commands, dataset_stats_on_synthetic_data) {
    auto r = run({"dataset-stats", "--dataset-dir", synthetic_mnist_dir(), "--limit", "100"});
    ASSERT_EQ(r.code, 0) << r.err;
    auto pairs = csv_table(r.out, "class_pairs");
    EXPECT_EQ(pairs.rows.size(), 45u);
    auto ds = csv_table(r.out, "dataset");
    EXPECT_EQ(cell(ds, 0, "images"), 100);
}

TEST(cli_commands, nn_curve_and_pipeline_are_thread_independent) {
    std::vector<std::string> base{"nn-curve", "--dataset-dir", synthetic_mnist_dir(), "--test-size", "40",
                                  "--grid", "0,0.1,0.3,0.5", "--trials", "3", "--seed", "5"};
    auto one = base, many = base;
    one.insert(one.end(), {"--threads", "1"});
    many.insert(many.end(), {"--threads", "4"});
    auto a = run(one), b = run(many);
    ASSERT_EQ(a.code, 0) << a.err;
    EXPECT_EQ(a.out, b.out);

    auto dir = fixtures::make_temp_dir("cli_pipeline");
    auto curve_csv = write_file(dir + "/curve.csv", a.out);
    auto json_run = base;
    json_run.insert(json_run.end(), {"--format", "json"});
    auto curve_json = write_file(dir + "/curve.json", run(json_run).out);

    auto fresh = base;
    fresh[0] = "pipeline";
    fresh.insert(fresh.end(), {"--n-total", "0,100,1000"});
    auto direct = run(fresh);
    ASSERT_EQ(direct.code, 0) << direct.err;
    for (const auto &path : {curve_csv, curve_json}) {
        auto from_file = run({"pipeline", "--curve", path, "--n-total", "0,100,1000"});
        ASSERT_EQ(from_file.code, 0) << from_file.err;
        auto x = csv_table(direct.out, "pipeline");
        auto y = csv_table(from_file.out, "pipeline");
        EXPECT_EQ(x.rows, y.rows);
    }
    auto garbage = write_file(dir + "/garbage.csv", "not,a,curve\n");
    EXPECT_EQ(run({"pipeline", "--curve", garbage}).code, kExitData);
}
