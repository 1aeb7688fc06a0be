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

// Command-line front end: solve | montecarlo | verify.

#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "noma/cli.hpp"

namespace {

noma::cli::Config config_or_defaults(const std::string& path) {
  return path.empty() ? noma::cli::Config{} : noma::cli::load_config(path);
}

std::optional<std::string> optional_path(const std::string& s) {
  return s.empty() ? std::nullopt : std::optional<std::string>(s);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"NOMA downlink power allocation and channel assignment"};
  app.require_subcommand(1);

  std::string config_path;
  std::string matrix_path;
  std::string csv_path;
  std::string save_matrix_path;
  auto* solve = app.add_subcommand("solve", "solve one scenario");
  solve->add_option("-c,--config", config_path, "key = value config file")
      ->check(CLI::ExistingFile);
  solve->add_option("-m,--matrix", matrix_path, "CNR matrix file")
      ->check(CLI::ExistingFile);
  solve->add_option("--csv", csv_path, "write per-user powers and rates");
  solve->add_option("--save-matrix", save_matrix_path,
                    "write the scenario's CNR matrix");

  std::string out_path = "-";
  bool timing = false;
  auto* mc = app.add_subcommand("montecarlo", "Monte-Carlo sweep to CSV");
  mc->add_option("-c,--config", config_path, "key = value config file")
      ->required()
      ->check(CLI::ExistingFile);
  mc->add_option("-o,--out", out_path, "output CSV ('-' for stdout)");
  mc->add_flag("--timing", timing, "fill wall_ms with measured times");

  std::string suite;
  int seeds = 25;
  auto* verify = app.add_subcommand("verify", "oracle verification suites");
  verify->add_option("suite", suite, "perchannel | budget | assignment")
      ->required();
  verify->add_option("-s,--seeds", seeds, "number of random instances");
  verify->add_option("-c,--config", config_path, "key = value config file")
      ->check(CLI::ExistingFile);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : noma::cli::kConfigFailure;
  }

  try {
    const noma::cli::Config cfg = config_or_defaults(config_path);
    if (*solve) {
      noma::cli::SolveArgs args{optional_path(matrix_path),
                                optional_path(csv_path),
                                optional_path(save_matrix_path)};
      return noma::cli::run_solve(cfg, args, std::cout, std::cerr);
    }
    if (*mc) {
      return noma::cli::run_montecarlo(cfg, out_path, timing, std::cout,
                                       std::cerr);
    }
    return noma::cli::run_verify(suite, seeds, cfg, std::cout, std::cerr);
  } catch (const noma::cli::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return noma::cli::kConfigFailure;
  }
}
