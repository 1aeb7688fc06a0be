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

#include <functional>
#include <span>
#include <vector>

#include "noma/criterion.hpp"
#include "noma/errors.hpp"
#include "noma/model.hpp"
#include "noma/perchannel.hpp"

namespace noma {

// One channel of a projected waterfilling problem. At multiplier nu the
// channel takes q(nu) = max(numerator / nu - intercept, floor).
struct WaterfillChannel {
  double numerator = 1.0;
  double intercept = 0.0;
  double floor = 0.0;
};

struct WaterfillSpec {
  std::vector<WaterfillChannel> channels;
  double total = 0.0;
};

struct WaterfillResult {
  Budgets budgets;
  double multiplier = 0.0;
  std::vector<bool> clamped;  // true where q_m sits on its floor
  int iterations = 0;
};

// Budgets at a given multiplier, without enforcing the total.
std::vector<double> waterfill_at(const WaterfillSpec& spec, double nu);

// Finds nu with sum q(nu) = total by bracketing and bisection, then solves
// the active set exactly. Throws InfeasibleError when the floors alone
// exceed the total.
WaterfillResult projected_waterfill(const WaterfillSpec& spec);

// Max-min fairness budgets: every channel ends at one common rate.
struct MmfBudgets {
  Budgets budgets;
  double multiplier = 0.0;
  double common_rate = 0.0;
  int iterations = 0;
};
MmfBudgets mmf_budgets(std::span<const ChannelPair> pairs, double total,
                       double bc);

// Weighted sum rate. Requires the weight-ratio condition on every channel
// and sum of floors 2*Omega*(1+theta_margin) <= total.
WaterfillResult sr1_budgets(std::span<const ChannelPair> pairs, double total,
                            double bc, double theta_margin = 1e-6);

// Sum rate under QoS thresholds. Requires A_weak >= 2 on every channel and
// sum of Upsilon floors <= total.
WaterfillResult sr2_budgets(std::span<const ChannelPair> pairs, double total,
                            double bc);

struct DinkelbachState {
  double alpha = 0.0;
  double surrogate_value = 0.0;  // H*(alpha) or Q*(alpha)
  int iteration = 0;
  Budgets budgets;
  std::vector<double> alpha_history;  // alpha used at each iteration
};

struct DinkelbachOptions {
  double delta_rel = 1e-6;  // stop once |H*| <= delta_rel * (1 + alpha)
  int max_iterations = 100;
};

class ConvergenceError : public Error {
 public:
  ConvergenceError(const std::string& what, DinkelbachState last)
      : Error(what), last_(std::move(last)) {}
  const DinkelbachState& last_state() const { return last_; }

 private:
  DinkelbachState last_;
};

// Dinkelbach iteration for max numerator(q) / denominator(q): starting from
// alpha = 0, solve q*(alpha) = argmax numerator - alpha * denominator and
// update alpha to the achieved ratio until the surrogate optimum vanishes.
DinkelbachState dinkelbach(
    const std::function<Budgets(double alpha)>& inner,
    const std::function<double(const Budgets&)>& numerator,
    const std::function<double(const Budgets&)>& denominator,
    const DinkelbachOptions& options = {});

struct EeBudgets {
  Budgets budgets;
  DinkelbachState state;
  double lambda = 0.0;  // power-constraint multiplier at the final alpha
};

EeBudgets ee1_budgets(std::span<const ChannelPair> pairs, double total,
                      double circuit_power, double bc,
                      double theta_margin = 1e-6,
                      const DinkelbachOptions& options = {});

// literal_weight reproduces the alternative numerator W_strong * bc in the
// inner closed form instead of bc.
EeBudgets ee2_budgets(std::span<const ChannelPair> pairs, double total,
                      double circuit_power, double bc,
                      bool literal_weight = false,
                      const DinkelbachOptions& options = {});

struct SolveInput {
  std::vector<ChannelPair> pairs;  // per channel, strong/weak ordered
  std::vector<UserPair> users;     // per channel, user ids matching pairs
  int num_users = 0;
  double bc = 1.0;
  double total_power = 1.0;
  double circuit_power = 1.0;
};

struct SolveOptions {
  double theta_margin = 1e-6;
  bool ee2_literal_weight = false;
  DinkelbachOptions dinkelbach;
};

struct SolveReport {
  Allocation allocation;
  Budgets budgets;
  std::vector<Stability> verdicts;  // per channel
  double objective = 0.0;
  double multiplier = 0.0;
  int iterations = 0;
  double kkt_residual = 0.0;
};

// Objective of the criterion recomputed from an allocation's raw rates.
double objective_of(Criterion c, const Allocation& allocation,
                    std::span<const ChannelPair> pairs, double circuit_power);

// Budgets, per-channel splits and aggregate metrics for a fixed assignment.
SolveReport solve(Criterion c, const SolveInput& input,
                  const SolveOptions& options = {});

}  // namespace noma
