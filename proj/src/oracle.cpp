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

#include "noma/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "noma/errors.hpp"

namespace noma::oracle {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr int kMaxEnumeratedUsers = 10;

// Golden-section maximisation of a unimodal function on [lo, hi].
GridPoint golden_max(const std::function<double(double)>& f, double lo,
                     double hi) {
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = lo;
  double b = hi;
  double c = b - inv_phi * (b - a);
  double d = a + inv_phi * (b - a);
  double fc = f(c);
  double fd = f(d);
  for (int it = 0; it < 200 && (b - a) > 1e-15 * std::max(1.0, hi); ++it) {
    if (fc >= fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - inv_phi * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_phi * (b - a);
      fd = f(d);
    }
  }
  GridPoint best{lo, f(lo), 0.0};
  for (double x : {c, d, hi}) {
    const double v = f(x);
    if (v > best.value) best = {x, v, 0.0};
  }
  best.resolution = b - a;
  return best;
}

// Boundary of a monotone predicate on [lo, hi] where pred(lo) != pred(hi);
// returns the endpoint of the final bracket on which pred holds.
double bisect_predicate(const std::function<bool(double)>& pred, double lo,
                        double hi) {
  const bool at_lo = pred(lo);
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if (pred(mid) == at_lo) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return at_lo ? lo : hi;
}

}  // namespace

GridPoint grid_max_1d(const std::function<double(double)>& objective,
                      double lo, double hi, std::int64_t points) {
  if (points < 1) throw DomainError("grid needs at least one interval");
  const double step = (hi - lo) / static_cast<double>(points);
  GridPoint best{lo, objective(lo), step};
  for (std::int64_t i = 1; i <= points; ++i) {
    const double x = lo + step * static_cast<double>(i);
    const double v = objective(x);
    if (v > best.value) {
      best.argmax = x;
      best.value = v;
    }
  }
  return best;
}

std::function<double(double)> split_objective(Criterion c,
                                              const ChannelPair& pair,
                                              double q, double bc) {
  return [c, pair, q, bc](double p) -> double {
    const PairRates r = rate_pair(pair, PowerSplit::of(p, q - p), bc);
    switch (c) {
      case Criterion::kMaxMinFairness:
        return std::min(r.strong, r.weak);
      case Criterion::kWeightedSumRate:
      case Criterion::kWeightedEnergyEff:
        return pair.weight_strong * r.strong + pair.weight_weak * r.weak;
      case Criterion::kQosSumRate:
      case Criterion::kQosEnergyEff:
        if (r.strong < pair.qos_strong || r.weak < pair.qos_weak) return -kInf;
        return r.strong + r.weak;
    }
    return -kInf;
  };
}

GridPoint grid_split(const std::function<double(double)>& objective, double q,
                     std::int64_t points) {
  if (points < 1000) throw DomainError("grid_split needs at least 1000 points");
  return grid_max_1d(objective, 0.0, 0.5 * q, points);
}

GridPoint search_split(Criterion c, const ChannelPair& pair, double q,
                       double bc) {
  const auto objective = split_objective(c, pair, q, bc);
  double lo = 0.0;
  double hi = 0.5 * q;
  if (uses_qos(c)) {
    auto strong_ok = [&](double p) {
      return rate_pair(pair, PowerSplit::of(p, q - p), bc).strong >=
             pair.qos_strong;
    };
    auto weak_ok = [&](double p) {
      return rate_pair(pair, PowerSplit::of(p, q - p), bc).weak >=
             pair.qos_weak;
    };
    if (!strong_ok(hi) || !weak_ok(lo)) return {0.0, -kInf, 0.0};
    if (!strong_ok(lo)) lo = bisect_predicate(strong_ok, lo, hi);
    if (!weak_ok(hi)) hi = bisect_predicate(weak_ok, 0.0, hi);
    if (lo > hi) return {0.0, -kInf, 0.0};
  }
  if (hi <= lo) return {lo, objective(lo), 0.0};
  return golden_max(objective, lo, hi);
}

BudgetGrid grid_budget(
    const std::vector<std::function<double(double)>>& channel_values,
    double total, const std::vector<double>& floors, std::int64_t points,
    Aggregate aggregate) {
  const std::size_t m = channel_values.size();
  if (m == 0 || m > 3) {
    throw DomainError("grid_budget supports 1 to 3 channels, got " +
                      std::to_string(m));
  }
  if (floors.size() != m) throw ShapeError("one floor per channel required");
  if (points < 1000) throw DomainError("grid_budget needs >= 1000 points");

  const double step = total / static_cast<double>(points);
  BudgetGrid out;
  out.resolution = step;

  // Smallest admissible lattice index per channel.
  std::vector<std::int64_t> first(m);
  for (std::size_t k = 0; k < m; ++k) {
    first[k] = static_cast<std::int64_t>(std::ceil(floors[k] / step - 1e-9));
    if (first[k] < 0) first[k] = 0;
  }
  std::vector<std::vector<double>> table(m);
  for (std::size_t k = 0; k < m; ++k) {
    table[k].assign(static_cast<std::size_t>(points + 1), -kInf);
    for (std::int64_t i = first[k]; i <= points; ++i) {
      table[k][static_cast<std::size_t>(i)] =
          channel_values[k](step * static_cast<double>(i));
    }
  }
  auto combine = [&](double acc, double v) {
    return aggregate == Aggregate::kSum ? acc + v : std::min(acc, v);
  };
  const double seed = aggregate == Aggregate::kSum ? 0.0 : kInf;
  auto consider = [&](const std::vector<std::int64_t>& idx) {
    double v = seed;
    for (std::size_t k = 0; k < m; ++k) {
      v = combine(v, table[k][static_cast<std::size_t>(idx[k])]);
    }
    if (!out.feasible || v > out.value) {
      out.feasible = true;
      out.value = v;
      out.q.resize(m);
      for (std::size_t k = 0; k < m; ++k) {
        out.q[k] = step * static_cast<double>(idx[k]);
      }
    }
  };

  std::vector<std::int64_t> idx(m);
  if (m == 1) {
    idx[0] = points;
    if (idx[0] >= first[0]) consider(idx);
  } else if (m == 2) {
    for (std::int64_t i = first[0]; i <= points - first[1]; ++i) {
      idx = {i, points - i};
      consider(idx);
    }
  } else {
    for (std::int64_t i = first[0]; i <= points; ++i) {
      for (std::int64_t j = first[1]; i + j <= points - first[2]; ++j) {
        idx = {i, j, points - i - j};
        consider(idx);
      }
    }
  }
  return out;
}

std::uint64_t assignment_count(int num_users) {
  std::uint64_t count = 1;
  for (int n = 2; n <= num_users; ++n) count *= static_cast<std::uint64_t>(n);
  for (int k = 0; k < num_users / 2; ++k) count /= 2;
  return count;
}

void for_each_assignment(int num_users, int num_channels,
                         const std::function<void(const Pairing&)>& fn) {
  if (num_users != 2 * num_channels || num_channels < 1) {
    throw ShapeError("assignment enumeration needs N = 2M >= 2");
  }
  if (num_users > kMaxEnumeratedUsers) {
    throw DomainError("refusing to enumerate " +
                      std::to_string(assignment_count(num_users)) +
                      " assignments for N = " + std::to_string(num_users) +
                      " (limit N <= " + std::to_string(kMaxEnumeratedUsers) +
                      ")");
  }
  std::vector<bool> used(static_cast<std::size_t>(num_users), false);
  Pairing current(static_cast<std::size_t>(num_channels));
  std::function<void(int)> place = [&](int channel) {
    if (channel == num_channels) {
      fn(current);
      return;
    }
    for (int u = 0; u < num_users; ++u) {
      if (used[u]) continue;
      used[u] = true;
      for (int v = u + 1; v < num_users; ++v) {
        if (used[v]) continue;
        used[v] = true;
        current[static_cast<std::size_t>(channel)] = {u, v};
        place(channel + 1);
        used[v] = false;
      }
      used[u] = false;
    }
  };
  place(0);
}

std::vector<Pairing> enumerate_assignments(int num_users, int num_channels) {
  std::vector<Pairing> all;
  for_each_assignment(num_users, num_channels,
                      [&](const Pairing& p) { all.push_back(p); });
  return all;
}

}  // namespace noma::oracle
