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

#include "distill/cli.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "gtest/gtest.h"

using namespace distill::cli;

namespace {

struct Result {
    int code;
    std::string out;
    std::string err;
};

Result run(std::vector<std::string> args) {
    args.insert(args.begin(), "distill");
    std::ostringstream out, err;
    int code = main_entry(args, out, err);
    return {code, out.str(), err.str()};
}

Json run_json(std::vector<std::string> args) {
    Result r = run(std::move(args));
    EXPECT_EQ(r.code, kOk) << r.err;
    return Json::parse(r.out);
}

std::vector<std::string> csv_lines(const std::string &text) {
    std::vector<std::string> lines;
    std::stringstream ss(text);
    std::string line;
    while (std::getline(ss, line)) {
        lines.push_back(line);
    }
    return lines;
}

std::vector<std::string> split(const std::string &line) {
    std::vector<std::string> out;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) {
        out.push_back(cell);
    }
    return out;
}

}  // namespace

TEST(cli_evaluate, small_example) {
    Json doc = run_json({"evaluate", "--n", "2", "--m", "1", "--fidelity", "0.8", "--format", "json"});
    const Json &row = doc["results"]["rows"][0];
    EXPECT_NEAR(row["p_accept"].get<double>(), 0.808, 1e-12);
    EXPECT_NEAR(row["p_accept_and_phi"].get<double>(), 0.664, 1e-12);
    EXPECT_EQ(doc["version"], kVersion);
    EXPECT_EQ(doc["config"]["command"], "evaluate");
    EXPECT_EQ(doc["config"]["parameters"]["error_budget"], 0);
    EXPECT_EQ(doc["config"]["parameters"]["objective"], "exact");
}

TEST(cli_evaluate, exit_codes) {
    EXPECT_EQ(run({"evaluate", "--n", "3", "--m", "0", "--fidelity", "0.9"}).code, kConfigError);
    EXPECT_EQ(run({"evaluate", "--n", "3", "--m", "1"}).code, kConfigError);
    EXPECT_EQ(run({"evaluate", "--n", "x", "--m", "1", "--fidelity", "0.9"}).code, kConfigError);
    EXPECT_EQ(run({"evaluate", "--n", "3", "--m", "1", "--fidelity", "0.9", "--bogus", "1"}).code, kConfigError);
    EXPECT_EQ(run({"nonsense"}).code, kConfigError);
    EXPECT_EQ(run({"plan", "--epsilon0", "0.3", "--target", "1e-12", "--n-max", "2"}).code, kOk);
    EXPECT_EQ(run({"repeater", "--link-infidelity", "0.4", "--target", "1e-9", "--n-cap", "5"}).code, kInfeasible);
}

TEST(cli_evaluate, csv_json_parity) {
    std::vector<std::string> base{"evaluate", "--n", "10", "--m", "4", "--epsilon", "0.05"};
    Json doc = run_json(base);
    auto csv = base;
    csv.insert(csv.end(), {"--format", "csv"});
    Result r = run(csv);
    ASSERT_EQ(r.code, kOk);
    auto lines = csv_lines(r.out);
    ASSERT_EQ(lines.size(), 2u);
    auto header = split(lines[0]), cells = split(lines[1]);
    ASSERT_EQ(header.size(), cells.size());
    for (std::size_t i = 0; i < header.size(); ++i) {
        const Json &v = doc["results"]["rows"][0][header[i]];
        if (v.is_number_float()) {
            EXPECT_EQ(std::strtod(cells[i].c_str(), nullptr), v.get<double>()) << header[i];
        } else if (v.is_number()) {
            EXPECT_EQ(std::stoll(cells[i]), v.get<std::int64_t>());
        } else {
            EXPECT_EQ(cells[i], v.get<std::string>());
        }
    }
}

TEST(cli_config, echoed_config_round_trips) {
    Json doc = run_json({"markov", "--n", "6", "--epsilon", "0.05", "--noise", "depolarizing", "--strength", "0.01",
                         "--gates", "0,10,100"});
    std::string path = ::testing::TempDir() + "cli_roundtrip.json";
    {
        std::ofstream f(path);
        f << doc["config"].dump();
    }
    Json again = run_json({"markov", "--config", path});
    EXPECT_EQ(again.dump(), doc.dump());
    ASSERT_EQ(doc["results"]["rows"].size(), 3u);
    std::remove(path.c_str());
}

TEST(cli_config, flags_override_file) {
    std::string path = ::testing::TempDir() + "cli_override.json";
    {
        std::ofstream f(path);
        f << R"({"command": "evaluate", "parameters": {"n": 4, "m": 1, "fidelity": 0.9}})";
    }
    Json doc = run_json({"evaluate", "--config", path, "--m", "2"});
    EXPECT_EQ(doc["results"]["rows"][0]["m"], 2);
    EXPECT_EQ(doc["results"]["rows"][0]["n"], 4);
    EXPECT_EQ(run({"plan", "--config", path}).code, kConfigError);
    std::remove(path.c_str());
}

TEST(cli_mc, seeded_runs_are_identical_and_unseeded_echo_seed) {
    std::vector<std::string> args{"mc", "--n", "4", "--m", "1", "--epsilon", "0.2", "--trials", "20000", "--seed", "42"};
    Result a = run(args), b = run(args);
    ASSERT_EQ(a.code, kOk);
    EXPECT_EQ(a.out, b.out);
    Result c = run({"mc", "--n", "4", "--m", "1", "--epsilon", "0.2", "--trials", "1000"});
    ASSERT_EQ(c.code, kOk);
    EXPECT_NE(c.err.find("seed:"), std::string::npos);
    Json doc = Json::parse(c.out);
    EXPECT_TRUE(doc["config"]["seed"].is_number_unsigned());
}

TEST(cli_mc, thread_count_does_not_change_results) {
    Json a = run_json({"mc", "--n", "6", "--m", "2", "--epsilon", "0.1", "--trials", "5000", "--seed", "7", "--threads", "1"});
    Json b = run_json({"mc", "--n", "6", "--m", "2", "--epsilon", "0.1", "--trials", "5000", "--seed", "7", "--threads", "3"});
    EXPECT_EQ(a["results"].dump(), b["results"].dump());
}

TEST(cli_plan, headline_plan) {
    Json doc = run_json({"plan", "--epsilon0", "0.01", "--target", "1e-9"});
    const Json &row = doc["results"]["rows"][0];
    EXPECT_LE(row["final_infidelity"].get<double>(), 1e-9);
    EXPECT_GE(row["layer_count"].get<int>(), 1);
    EXPECT_EQ(doc["results"]["layers"].size(), row["layer_count"].get<std::size_t>());
    EXPECT_TRUE(row["retry_mean"].is_null());
}

TEST(cli_repeater, fixed_and_heuristic) {
    Json fixed = run_json({"repeater", "--link-infidelity", "0.0035", "--n", "93", "--k", "68", "--n-prime", "40"});
    Json heur = run_json({"repeater", "--link-infidelity", "0.0035"});
    EXPECT_EQ(fixed["results"]["rows"][0]["meets_target"], 1);
    EXPECT_LE(heur["results"]["rows"][0]["end_to_end_overhead"].get<double>(),
              1.05 * fixed["results"]["rows"][0]["end_to_end_overhead"].get<double>());
}

TEST(cli_sweep, grid_rows_and_empty_grid) {
    Result r = run({"sweep", "--command", "evaluate", "--base", R"({"fidelity": 0.8})", "--grid",
                    R"({"n": [8, 16], "m_fraction": [0.25, 0.5, 0.75]})", "--format", "csv"});
    ASSERT_EQ(r.code, kOk) << r.err;
    auto lines = csv_lines(r.out);
    ASSERT_EQ(lines.size(), 7u);
    EXPECT_EQ(lines[0].rfind("m_fraction,n,m,k,", 0), 0u);
    Result e = run({"sweep", "--command", "evaluate", "--base", R"({"fidelity": 0.8})", "--grid", R"({"n": []})",
                    "--format", "csv"});
    ASSERT_EQ(e.code, kOk);
    EXPECT_EQ(csv_lines(e.out).size(), 1u);
    Result big = run({"sweep", "--command", "evaluate", "--base", R"({"fidelity": 0.8, "m": 1})", "--grid",
                      R"({"n": [2, 3, 4]})", "--max-rows", "2"});
    EXPECT_EQ(big.code, kConfigError);
    Result bad = run({"sweep", "--command", "evaluate", "--grid", R"({"colour": [1]})"});
    EXPECT_EQ(bad.code, kConfigError);
}

TEST(cli_sweep, phase_transition_trend) {
    Json doc = run_json({"sweep", "--command", "evaluate", "--base", R"({"fidelity": 0.8, "m_fraction": 0.4})",
                         "--grid", R"({"n": [10, 20, 40, 80, 160]})"});
    double prev = 0.0;
    for (const auto &row : doc["results"]["rows"]) {
        double f = row["block_fidelity"].get<double>();
        EXPECT_GT(f, prev);
        prev = f;
    }
}

TEST(cli_sweep, markov_rows_expand) {
    Json doc = run_json({"sweep", "--command", "markov", "--base", R"({"n": 10, "epsilon": 0.02, "gates": [1, 10, 100]})",
                         "--grid", R"({"strength": [0.0, 0.001]})", "--seed", "1"});
    EXPECT_EQ(doc["results"]["rows"].size(), 6u);
    EXPECT_EQ(doc["results"]["columns"][0], "strength");
}
