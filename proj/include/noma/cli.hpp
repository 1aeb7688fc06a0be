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

#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "noma/budget.hpp"
#include "noma/criterion.hpp"
#include "noma/errors.hpp"
#include "noma/scenario.hpp"

// Command implementations behind the noma_cli executable. Each command
// writes to caller-supplied streams and returns a process exit code.
namespace noma::cli {

enum ExitCode : int {
  kSuccess = 0,
  kRuntimeFailure = 1,
  kConfigFailure = 2,
  kInfeasible = 3,
  kVerificationFailure = 4,
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

enum class Method { kMatching, kCup, kExhaustive, kOfdma };

std::string to_string(Method m);
Method parse_method(const std::string& name);

struct Config {
  std::vector<Criterion> criteria{Criterion::kMaxMinFairness};
  std::vector<Method> methods{Method::kMatching};
  ScenarioParams scenario;
  int trials = 1;
  std::vector<double> sweep_power_dbm;  // empty: scenario.bs_power_dbm only
  std::vector<int> sweep_users;         // empty: scenario.num_users only
  int joint_iters = 10;
  SolveOptions solve;
};

// Flat "key = value" text; '#' starts a comment. Lists are comma separated.
// Throws ConfigError on unknown or repeated keys and unparsable values.
Config parse_config(std::istream& is);
Config load_config(const std::string& path);

struct MethodOutcome {
  bool feasible = false;
  bool stable = false;
  double min_rate = 0.0;
  double sum_rate = 0.0;
  double energy_efficiency = 0.0;
  double objective = 0.0;
  int iterations = 0;
  std::string failure;  // reason when infeasible
};

// Runs one method on one scenario. Infeasibility is reported in the outcome
// rather than thrown.
MethodOutcome evaluate_method(Criterion c, Method m, const Scenario& s,
                              const Config& cfg);

// Seed of the scenario used for a Monte-Carlo trial with n users.
std::uint64_t trial_seed(std::uint64_t base, int trial, int num_users);

struct SolveArgs {
  std::optional<std::string> matrix_path;
  std::optional<std::string> csv_path;
  std::optional<std::string> save_matrix_path;
};

int run_solve(const Config& cfg, const SolveArgs& args, std::ostream& out,
              std::ostream& err);

inline constexpr const char* kMonteCarloHeader =
    "seed,trial,criterion,method,P_dbm,N,M,min_rate_bps,sum_rate_bps,"
    "ee_bps_per_w,feasible,stable,iters,wall_ms";

// Rows ordered by (trial, users, power, criterion, method). wall_ms is 0
// unless timing is requested, which keeps the file reproducible.
void write_montecarlo(const Config& cfg, std::ostream& csv, bool timing);
int run_montecarlo(const Config& cfg, const std::string& out_path,
                   bool timing, std::ostream& out, std::ostream& err);

struct VerifyOutcome {
  std::string suite;
  int checks = 0;
  int skipped = 0;
  std::vector<std::string> failures;
  double max_gap = 0.0;   // assignment suite: worst relative shortfall
  double mean_gap = 0.0;
  bool passed() const { return failures.empty(); }
};

// Closed-form splits against a dense grid over [0, q/2] on random channels.
VerifyOutcome verify_perchannel(int seeds, std::uint64_t base_seed,
                                std::int64_t grid_points = 100000);
// Budget solvers against the simplex grid for M <= 3.
VerifyOutcome verify_budget(int seeds, std::uint64_t base_seed,
                            std::int64_t grid_points = 1000);
// Matching-based joint optimisation against exhaustive search, N = 6,
// total power cycling through 2..12 W; fails when any gap exceeds
// max_gap_allowed.
VerifyOutcome verify_assignment(int seeds, const Config& cfg,
                                double max_gap_allowed = 0.05);

int run_verify(const std::string& suite, int seeds, const Config& cfg,
               std::ostream& out, std::ostream& err);

}  // namespace noma::cli
