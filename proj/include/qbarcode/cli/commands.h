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

#ifndef QBARCODE_CLI_COMMANDS_H_
#define QBARCODE_CLI_COMMANDS_H_

#include <iosfwd>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "qbarcode/cli/output.h"
#include "qbarcode/gaussian_optics.h"

namespace qbarcode::cli {

enum ExitCode : int { kExitOk = 0, kExitFailure = 1, kExitUsage = 2, kExitData = 3, kExitDomain = 4 };

/// A subcommand with every option resolved to text (defaults, then the JSON
/// config file, then flags). Typed accessors throw UsageError naming the field.
struct RunConfig {
    std::string command;
    std::map<std::string, std::string> values;
    int threads = 0;

    const std::string &text(const std::string &key) const;
    bool has(const std::string &key) const;
    double real(const std::string &key) const;
    int64_t integer(const std::string &key) const;
    std::vector<double> grid(const std::string &key) const;
    std::vector<int64_t> integer_grid(const std::string &key) const;
    TransmissivityPair pair() const;

    /// The values embedded in output metadata. Thread count and paths that
    /// only steer I/O are left out so they cannot change the output bytes.
    nlohmann::json metadata() const;
};

struct OptionSpec {
    std::string name;
    std::string default_value;
    std::string help;
};

/// Options accepted by a subcommand, shared ones included.
std::vector<OptionSpec> command_options(std::string_view command);
std::vector<std::string> command_names();

Document cmd_fidelity(const RunConfig &config);
Document cmd_bounds(const RunConfig &config);
Document cmd_advantage_map(const RunConfig &config);
Document cmd_dataset_stats(const RunConfig &config);
Document cmd_nn_curve(const RunConfig &config);
Document cmd_pipeline(const RunConfig &config);

Document run_command(const RunConfig &config);

/// Full command-line entry point. Returns the process exit code.
int run_cli(int argc, char **argv, std::ostream &out, std::ostream &err);

}  // namespace qbarcode::cli

#endif  // QBARCODE_CLI_COMMANDS_H_
