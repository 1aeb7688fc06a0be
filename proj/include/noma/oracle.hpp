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

#include <array>
#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "noma/criterion.hpp"
#include "noma/model.hpp"

// Brute-force reference solvers. Everything here evaluates objectives through
// rate_pair() only and never calls into the closed-form solvers, so the
// results can be used to check them.
namespace noma::oracle {

struct GridPoint {
  double argmax = 0.0;
  double value = 0.0;
  double resolution = 0.0;  // grid spacing
};

// Dense evaluation on points+1 equally spaced abscissae in [lo, hi]; the
// first maximiser wins ties.
GridPoint grid_max_1d(const std::function<double(double)>& objective,
                      double lo, double hi, std::int64_t points);

// Per-channel objective of the strong-user power p on budget q. For the QoS
// criteria points violating a threshold evaluate to -inf.
std::function<double(double)> split_objective(Criterion c,
                                              const ChannelPair& pair,
                                              double q, double bc);

// grid_max_1d over the order-feasible range p_strong in [0, q/2].
GridPoint grid_split(const std::function<double(double)>& objective, double q,
                     std::int64_t points);

// Continuous maximisation of split_objective over [0, q/2]: constraint
// boundaries by bisection, then golden-section search. Returns -inf value
// when no feasible split exists.
GridPoint search_split(Criterion c, const ChannelPair& pair, double q,
                       double bc);

enum class Aggregate { kSum, kMin };

struct BudgetGrid {
  bool feasible = false;
  std::vector<double> q;
  double value = 0.0;
  double resolution = 0.0;
};

// Exhaustive search over { q : sum q = total, q_m >= floor_m } on the
// lattice q_m = i_m * total / points, M <= 3. Each per-channel value is
// tabulated once per lattice level.
BudgetGrid grid_budget(
    const std::vector<std::function<double(double)>>& channel_values,
    double total, const std::vector<double>& floors, std::int64_t points,
    Aggregate aggregate);

using Pairing = std::vector<std::array<int, 2>>;  // channel -> {u, v}, u < v

// Number of labeled assignments of N = 2M users to M two-user channels.
std::uint64_t assignment_count(int num_users);
// Calls fn for every labeled assignment, in lexicographic order.
void for_each_assignment(int num_users, int num_channels,
                         const std::function<void(const Pairing&)>& fn);
std::vector<Pairing> enumerate_assignments(int num_users, int num_channels);

}  // namespace noma::oracle
