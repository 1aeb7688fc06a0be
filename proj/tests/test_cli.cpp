// Copyright 2026 The noma-alloc Authors
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

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "noma/cli.hpp"

namespace cli = noma::cli;
namespace fs = std::filesystem;

namespace {

cli::Config config(const std::string& text) {
  std::istringstream in(text);
  return cli::parse_config(in);
}

std::string temp_path(const std::string& name) {
  return (fs::temp_directory_path() / ("noma_test_" + name)).string();
}

std::string write_matrix(const std::string& name,
                         const std::vector<std::vector<double>>& rows) {
  noma::ScenarioParams p;
  p.num_users = static_cast<int>(rows.size());
  p.num_channels = static_cast<int>(rows[0].size());
  const std::string path = temp_path(name);
  std::ofstream f(path);
  noma::write_matrix_csv(f, noma::from_matrix(rows, p));
  return path;
}

std::vector<double> user_rates(const std::string& report) {
  std::istringstream in(report);
  std::string line;
  while (std::getline(in, line) && line != "user,channel,role,power_w,rate_bps") {
  }
  std::vector<double> rates;
  while (std::getline(in, line) && !line.empty()) {
    rates.push_back(std::stod(line.substr(line.rfind(',') + 1)));
  }
  return rates;
}

}  // namespace

TEST_CASE("parse_config reads keys, lists and comments") {
  const auto cfg = config(
      "# sweep\n"
      "criterion = mmf, sr2\n"
      "method = matching,cup , ofdma\n"
      "channels = 4   # N follows\n"
      "power_dbm = 35.5\n"
      "trials = 3\n"
      "sweep_users = 4, 8\n"
      "ee2_literal_weight = true\n");
  CHECK(cfg.criteria.size() == 2);
  CHECK(cfg.criteria[1] == noma::Criterion::kQosSumRate);
  CHECK(cfg.methods.size() == 3);
  CHECK(cfg.methods[2] == cli::Method::kOfdma);
  CHECK(cfg.scenario.num_channels == 4);
  CHECK(cfg.scenario.num_users == 8);
  CHECK(cfg.scenario.bs_power_dbm == 35.5);
  CHECK(cfg.trials == 3);
  CHECK(cfg.sweep_users == std::vector<int>{4, 8});
  CHECK(cfg.solve.ee2_literal_weight);
}

TEST_CASE("parse_config rejects malformed input") {
  CHECK_THROWS_AS(config("colour = red\n"), cli::ConfigError);
  CHECK_THROWS_AS(config("seed = 1\nseed = 2\n"), cli::ConfigError);
  CHECK_THROWS_AS(config("users = 8\nchannels = 3\n"), cli::ConfigError);
  CHECK_THROWS_AS(config("users = 7\n"), cli::ConfigError);
  CHECK_THROWS_AS(config("criterion = \n"), cli::ConfigError);
  CHECK_THROWS_AS(config("criterion = maxmin\n"), cli::ConfigError);
  CHECK_THROWS_AS(config("method = greedy\n"), cli::ConfigError);
  CHECK_THROWS_AS(config("trials = 0\n"), cli::ConfigError);
  CHECK_THROWS_AS(config("power_dbm = loud\n"), cli::ConfigError);
  CHECK_THROWS_AS(config("sweep_users = 4, 5\n"), cli::ConfigError);
  CHECK_THROWS_AS(cli::load_config(temp_path("missing.cfg")),
                  cli::ConfigError);
}

TEST_CASE("solve on a matrix file: max-min rates are equal") {
  const std::string path =
      write_matrix("mmf.csv", {{50, 2}, {40, 3}, {1, 30}, {2, 20}});
  cli::SolveArgs args;
  args.matrix_path = path;
  std::ostringstream out, err;
  const int code = cli::run_solve(config("criterion = mmf\n"), args, out, err);
  REQUIRE(code == cli::kSuccess);
  const auto rates = user_rates(out.str());
  REQUIRE(rates.size() == 4);
  for (double r : rates) CHECK(r == doctest::Approx(rates[0]).epsilon(1e-6));
  fs::remove(path);
}

TEST_CASE("solve reports infeasible QoS with the power it needs") {
  const std::string path =
      write_matrix("sr2.csv", {{2, 1}, {1.5, 0.5}, {0.5, 1.2}, {0.3, 0.8}});
  cli::SolveArgs args;
  args.matrix_path = path;
  std::ostringstream out, err;
  const int code = cli::run_solve(
      config("criterion = sr2\npower_dbm = 30\n"), args, out, err);
  CHECK(code == cli::kInfeasible);
  CHECK(err.str().find("required power:") != std::string::npos);
  fs::remove(path);
}

TEST_CASE("solve: exhaustive search is never worse than matching") {
  for (const char* c : {"mmf", "sr2"}) {
    double objective[2];
    int i = 0;
    for (const char* m : {"matching", "exhaustive"}) {
      std::ostringstream out, err;
      const auto cfg = config(std::string("users = 6\nseed = 4\ncriterion = ") +
                              c + "\nmethod = " + m + "\n");
      REQUIRE(cli::run_solve(cfg, {}, out, err) == cli::kSuccess);
      std::istringstream in(out.str());
      std::string key;
      while (in >> key && key != "objective") {
      }
      in >> objective[i++];
    }
    CHECK(objective[1] >= objective[0] * (1.0 - 1e-9));
  }
}

TEST_CASE("solve rejects a matrix file with the wrong shape") {
  const std::string path = temp_path("bad.csv");
  {
    std::ofstream f(path);
    f << "3,2\n1,2\n3,4\n5,6\n";
  }
  cli::SolveArgs args;
  args.matrix_path = path;
  std::ostringstream out, err;
  CHECK(cli::run_solve(config(""), args, out, err) == cli::kConfigFailure);
  fs::remove(path);
}

TEST_CASE("montecarlo output is deterministic and complete") {
  const auto cfg = config(
      "criterion = mmf, sr1\n"
      "method = matching, cup, ofdma\n"
      "trials = 2\n"
      "sweep_users = 4, 6\n"
      "sweep_power_dbm = 30, 40\n"
      "seed = 11\n");
  std::ostringstream a, b;
  cli::write_montecarlo(cfg, a, false);
  cli::write_montecarlo(cfg, b, false);
  CHECK(a.str() == b.str());

  std::istringstream in(a.str());
  std::string line;
  std::getline(in, line);
  CHECK(line == cli::kMonteCarloHeader);
  int rows = 0;
  while (std::getline(in, line)) {
    ++rows;
    CHECK(std::count(line.begin(), line.end(), ',') == 13);
    CHECK(line.substr(line.rfind(',') + 1) == "0");
  }
  CHECK(rows == 2 * 2 * 2 * 2 * 3);
}

TEST_CASE("montecarlo refuses exhaustive search on large N") {
  std::ostringstream out, err;
  const auto cfg = config("method = exhaustive\nusers = 12\n");
  CHECK(cli::run_montecarlo(cfg, "-", false, out, err) ==
        cli::kConfigFailure);
}

TEST_CASE("verify exit codes") {
  std::ostringstream out, err;
  CHECK(cli::run_verify("perchannel", 3, config(""), out, err) ==
        cli::kSuccess);
  CHECK(out.str().find("PASS") != std::string::npos);
  CHECK(cli::run_verify("budget", 3, config(""), out, err) == cli::kSuccess);
  CHECK(cli::run_verify("nonsense", 3, config(""), out, err) ==
        cli::kConfigFailure);
  CHECK(cli::run_verify("budget", 0, config(""), out, err) ==
        cli::kConfigFailure);
}
