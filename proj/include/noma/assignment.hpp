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

#include <string>
#include <vector>

#include "noma/budget.hpp"
#include "noma/criterion.hpp"
#include "noma/model.hpp"
#include "noma/scenario.hpp"

namespace noma {

// Bookkeeping of the deferred-acceptance procedure.
struct PreferenceState {
  // Channels each user has not yet been rejected by, best CNR first.
  std::vector<std::vector<int>> user_prefs;
  std::vector<std::vector<int>> matched;  // per channel, at most two users
  std::vector<int> unmatched;             // ascending user ids

  static PreferenceState initial(const CnrMatrix& cnr);
  // Capacity and partition invariants.
  bool consistent(int num_users) const;
};

// A full channel exchanging one member for the proposer.
struct SwapRecord {
  int channel = -1;
  int entered = -1;
  int left = -1;
  double value_before = 0.0;
  double value_after = 0.0;
};

struct MatchResult {
  std::vector<UserPair> assignment;  // per channel, ordered by CNR there
  int proposal_count = 0;
  int rejections = 0;
  bool fallback_used = false;
  std::vector<SwapRecord> swaps;
};

// True when every user sits on exactly one channel and every channel holds
// two distinct users, strong one first.
bool is_two_to_one(const std::vector<UserPair>& assignment,
                   const CnrMatrix& cnr);

Pairing to_pairing(const std::vector<UserPair>& assignment);

// Value a channel assigns to hosting users u and v at budget q: the
// criterion's optimal per-channel objective, with the EE criteria ranked by
// their sum-rate counterparts and unstable or infeasible pairs at -inf.
double pair_preference(Criterion c, const Scenario& s, int channel, int u,
                       int v, double q);

// Deferred acceptance: users propose to channels in preference order, and a
// full channel swaps a member for the proposer only if that strictly raises
// its value at budgets[m].
MatchResult da_match(const Scenario& s, Criterion c,
                     const std::vector<double>& budgets);

struct JointIteration {
  std::vector<UserPair> assignment;
  std::vector<double> budgets;
  double objective = 0.0;
};

struct JointResult {
  SolveReport report;
  MatchResult match;
  std::vector<JointIteration> history;
  bool repeated = false;  // stopped because the assignment came back
};

// Alternates matching at the current budgets and a full power solve,
// starting from equal budgets P/M.
JointResult joint_optimize(Criterion c, const Scenario& s, int max_iters = 10,
                           const SolveOptions& options = {});

// Opposite-rank pairing on mean CNR: rank k with rank N-k+1 on channel k.
MatchResult cup_assign(const CnrMatrix& cnr);

struct ExhaustiveResult {
  SolveReport report;
  std::vector<UserPair> assignment;
  int evaluated = 0;
  int feasible = 0;
};

constexpr int kMaxExhaustiveUsers = 10;

// Solves every labeled assignment and keeps the best objective; the first
// one in enumeration order wins ties. Throws InfeasibleError when none is
// feasible.
ExhaustiveResult exhaustive_assign(Criterion c, const Scenario& s,
                                   const SolveOptions& options = {});

enum class OfdmaMode { kSumRate, kMaxMin, kEnergyEfficiency };

OfdmaMode ofdma_mode_for(Criterion c);

struct OfdmaResult {
  std::vector<double> powers;  // W, per user
  std::vector<double> rates;   // bit/s, per user
  std::vector<int> channel;    // parent channel of each user's subband
  double min_rate = 0.0;
  double sum_rate = 0.0;
  double transmit_power = 0.0;
  double energy_efficiency = 0.0;
  int iterations = 0;
};

// Powers and rates for users on private subbands of width subband_bw with
// the given CNRs (noise already scaled to the subband).
OfdmaResult ofdma_rates(OfdmaMode mode, const std::vector<double>& cnrs,
                        double subband_bw, double total_power,
                        double circuit_power = 0.0);

// Each channel is halved into two subbands of width B/N; users in index
// order take their best channel with a free half.
OfdmaResult ofdma_baseline(OfdmaMode mode, const Scenario& s);

}  // namespace noma
