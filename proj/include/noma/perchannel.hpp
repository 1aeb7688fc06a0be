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

#include <span>
#include <string_view>
#include <vector>

#include "noma/criterion.hpp"
#include "noma/model.hpp"

namespace noma {

enum class Stability {
  kStable,              // p_strong < p_weak, both users served
  kUnstableEqualSplit,  // optimum sits on the order boundary p_strong = p_weak
  kInfeasibleQos,       // no split meets both rate thresholds
  kWeakOnly,            // optimum switches the strong user off (p_strong = 0)
};

std::string_view to_string(Stability s);

struct SplitResult {
  PowerSplit split;
  double channel_value = 0.0;  // bit/s; -inf when kInfeasibleQos
  Stability stability = Stability::kStable;
};

// Optimal splits of a fixed channel budget q between the two users.
SplitResult mmf_split(const ChannelPair& pair, double q, double bc);
SplitResult wsr_split(const ChannelPair& pair, double q, double bc);
SplitResult qos_split(const ChannelPair& pair, double q, double bc);

// Dispatches on the criterion; the EE criteria share the SR splits because
// the denominator is fixed once the budgets are.
SplitResult optimal_split(Criterion c, const ChannelPair& pair, double q,
                          double bc);

// Optimal per-channel objective at budget q, straight from the closed forms
// (no split is materialised). -inf for QoS criteria when q is infeasible.
double channel_value(Criterion c, const ChannelPair& pair, double q, double bc);

// d f*/dq on the stable branch of the criterion's closed form.
double channel_marginal(Criterion c, const ChannelPair& pair, double q,
                        double bc);

// Strong-user power at the weighted-sum-rate stationary point.
double wsr_root(const ChannelPair& pair);
// True iff 1 < W_weak/W_strong < G_strong/G_weak.
bool wsr_weights_admissible(const ChannelPair& pair);
// Minimum budget that meets both QoS thresholds.
double qos_floor(const ChannelPair& pair, double bc);

struct ChannelCondition {
  bool structural_ok = true;  // weight ratio (sr1/ee1) or A_weak >= 2 (sr2/ee2)
  double floor = 0.0;         // 2*Omega or Upsilon; 0 for mmf
};

struct StabilityReport {
  std::vector<ChannelCondition> channels;
  double required_power = 0.0;  // sum of floors
  bool stable = true;
};

// Necessary conditions for SIC-stability of the whole system at total
// power P. Max-min fairness is always stable for P > 0.
StabilityReport sic_stability_system(Criterion c,
                                     std::span<const ChannelPair> pairs,
                                     double total_power, double bc);

}  // namespace noma
