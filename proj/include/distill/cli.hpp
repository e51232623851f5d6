// Copyright 2026 The Distill Authors
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

// Command-line front end. Every command produces a fixed-column table; JSON output
// wraps it as {config, results, version}.

#ifndef DISTILL_CLI_HPP
#define DISTILL_CLI_HPP

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "json.hpp"

namespace distill::cli {

inline constexpr const char *kVersion = "1.0.0";

enum ExitCode : int { kOk = 0, kConfigError = 2, kInfeasible = 3, kInternal = 4 };

class ConfigError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

using Json = nlohmann::ordered_json;

struct RunConfig {
    std::string command;
    /// Fully resolved parameters, defaults included.
    Json parameters = Json::object();
    std::optional<std::uint64_t> seed;
    std::string format = "json";
    /// Empty means standard output.
    std::string output;

    Json to_json() const;
};

using Cell = std::variant<std::int64_t, double, std::string>;

struct Table {
    std::vector<std::string> columns;
    std::vector<std::vector<Cell>> rows;
    /// Structured extras only present in JSON output.
    Json detail = Json::object();
};

/// Names of the commands.
const std::vector<std::string> &commands();

/// Fixed CSV header of a command.
std::vector<std::string> columns_for(const std::string &command, const Json &parameters);

/// Parses argv (argv[0] is the program). Throws ConfigError.
RunConfig parse_args(const std::vector<std::string> &args);

/// Fills defaults, checks types and rejects unknown keys. Throws ConfigError.
RunConfig resolve(const std::string &command, const Json &given, std::optional<std::uint64_t> seed, std::string format,
                  std::string output);

/// Runs a resolved config. Throws DomainError, InfeasibleError or ConfigError.
Table execute(const RunConfig &config);

std::string render_csv(const Table &table);
std::string render_json(const RunConfig &config, const Table &table);
std::string render(const RunConfig &config, const Table &table);

/// Entry point used by the executable; returns the exit code.
int main_entry(const std::vector<std::string> &args, std::ostream &out, std::ostream &err);

}  // namespace distill::cli

#endif
