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

#include "noma/assignment.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <string>

#include "noma/errors.hpp"
#include "noma/oracle.hpp"
#include "noma/perchannel.hpp"

namespace noma {
namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

void check_shape(const CnrMatrix& cnr) {
  if (cnr.channels() < 1 || cnr.users() != 2 * cnr.channels()) {
    throw ShapeError("assignment needs N = 2M users, got N = " +
                     std::to_string(cnr.users()) + ", M = " +
                     std::to_string(cnr.channels()));
  }
}

Criterion ranking_criterion(Criterion c) {
  switch (c) {
    case Criterion::kWeightedEnergyEff: return Criterion::kWeightedSumRate;
    case Criterion::kQosEnergyEff: return Criterion::kQosSumRate;
    default: return c;
  }
}

void erase_value(std::vector<int>& v, int x) {
  v.erase(std::remove(v.begin(), v.end(), x), v.end());
}

void insert_sorted(std::vector<int>& v, int x) {
  v.insert(std::lower_bound(v.begin(), v.end(), x), x);
}

std::vector<UserPair> ordered_assignment(const Scenario& s,
                                         const std::vector<std::vector<int>>& m) {
  std::vector<UserPair> out(m.size());
  for (std::size_t ch = 0; ch < m.size(); ++ch) {
    make_channel_pair(s, static_cast<int>(ch), m[ch][0], m[ch][1], &out[ch]);
  }
  return out;
}

void finish_metrics(OfdmaResult& r, double bw, const std::vector<double>& g,
                    double circuit_power) {
  r.rates.resize(g.size());
  r.sum_rate = 0.0;
  r.transmit_power = 0.0;
  r.min_rate = std::numeric_limits<double>::infinity();
  for (std::size_t n = 0; n < g.size(); ++n) {
    r.rates[n] = bw * std::log2(1.0 + r.powers[n] * g[n]);
    r.sum_rate += r.rates[n];
    r.transmit_power += r.powers[n];
    r.min_rate = std::min(r.min_rate, r.rates[n]);
  }
  r.energy_efficiency = r.sum_rate / (circuit_power + r.transmit_power);
}

}  // namespace

PreferenceState PreferenceState::initial(const CnrMatrix& cnr) {
  check_shape(cnr);
  PreferenceState st;
  st.user_prefs.resize(cnr.users());
  for (int n = 0; n < cnr.users(); ++n) {
    std::vector<int>& prefs = st.user_prefs[n];
    prefs.resize(cnr.channels());
    std::iota(prefs.begin(), prefs.end(), 0);
    std::stable_sort(prefs.begin(), prefs.end(), [&](int a, int b) {
      return cnr(n, a) > cnr(n, b);
    });
  }
  st.matched.resize(cnr.channels());
  st.unmatched.resize(cnr.users());
  std::iota(st.unmatched.begin(), st.unmatched.end(), 0);
  return st;
}

bool PreferenceState::consistent(int num_users) const {
  std::vector<int> seen(num_users, 0);
  for (const auto& members : matched) {
    if (members.size() > 2) return false;
    for (int u : members) ++seen[u];
  }
  for (int u : unmatched) ++seen[u];
  return std::all_of(seen.begin(), seen.end(), [](int k) { return k == 1; });
}

bool is_two_to_one(const std::vector<UserPair>& assignment,
                   const CnrMatrix& cnr) {
  if (static_cast<int>(assignment.size()) != cnr.channels()) return false;
  std::vector<int> seen(cnr.users(), 0);
  for (std::size_t m = 0; m < assignment.size(); ++m) {
    const UserPair& p = assignment[m];
    if (p.strong < 0 || p.weak < 0 || p.strong >= cnr.users() ||
        p.weak >= cnr.users() || p.strong == p.weak) {
      return false;
    }
    const int ch = static_cast<int>(m);
    if (cnr(p.strong, ch) < cnr(p.weak, ch)) return false;
    ++seen[p.strong];
    ++seen[p.weak];
  }
  return std::all_of(seen.begin(), seen.end(), [](int k) { return k == 1; });
}

Pairing to_pairing(const std::vector<UserPair>& assignment) {
  Pairing out;
  out.reserve(assignment.size());
  for (const UserPair& p : assignment) {
    out.push_back({std::min(p.strong, p.weak), std::max(p.strong, p.weak)});
  }
  return out;
}

double pair_preference(Criterion c, const Scenario& s, int channel, int u,
                       int v, double q) {
  const ChannelPair pair = make_channel_pair(s, channel, u, v);
  const SplitResult r = optimal_split(ranking_criterion(c), pair, q,
                                      s.params.channel_bandwidth());
  return r.stability == Stability::kStable ? r.channel_value : kNegInf;
}

MatchResult da_match(const Scenario& s, Criterion c,
                     const std::vector<double>& budgets) {
  const CnrMatrix& cnr = s.cnr;
  PreferenceState st = PreferenceState::initial(cnr);
  if (static_cast<int>(budgets.size()) != cnr.channels()) {
    throw ShapeError("one budget per channel is required");
  }
  MatchResult out;
  const int n_users = cnr.users();
  while (!st.unmatched.empty()) {
    for (int n = 0; n < n_users; ++n) {
      if (!std::binary_search(st.unmatched.begin(), st.unmatched.end(), n) ||
          st.user_prefs[n].empty()) {
        continue;
      }
      const int m = st.user_prefs[n].front();
      std::vector<int>& members = st.matched[m];
      ++out.proposal_count;
      if (members.size() < 2) {
        members.push_back(n);
        erase_value(st.unmatched, n);
        continue;
      }
      const int a = members[0];
      const int b = members[1];
      const double q = budgets[m];
      const double current = pair_preference(c, s, m, a, b, q);
      const double keep_a = pair_preference(c, s, m, a, n, q);
      const double keep_b = pair_preference(c, s, m, b, n, q);
      // Between equal candidates the lower-index incumbent stays.
      const bool prefer_a = keep_a > keep_b || (keep_a == keep_b && a < b);
      const double best = prefer_a ? keep_a : keep_b;
      int rejected = n;
      if (best > current) {
        rejected = prefer_a ? b : a;
        out.swaps.push_back({m, n, rejected, current, best});
        std::replace(members.begin(), members.end(), rejected, n);
        erase_value(st.unmatched, n);
        insert_sorted(st.unmatched, rejected);
      }
      erase_value(st.user_prefs[rejected], m);
      ++out.rejections;
    }
    // A user every channel has turned down takes any open seat.
    for (int n : std::vector<int>(st.unmatched)) {
      if (!st.user_prefs[n].empty()) continue;
      for (auto& members : st.matched) {
        if (members.size() < 2) {
          members.push_back(n);
          erase_value(st.unmatched, n);
          out.fallback_used = true;
          break;
        }
      }
    }
  }
  out.assignment = ordered_assignment(s, st.matched);
  return out;
}

JointResult joint_optimize(Criterion c, const Scenario& s, int max_iters,
                           const SolveOptions& options) {
  check_shape(s.cnr);
  if (max_iters < 1) throw DomainError("max_iters must be >= 1");
  const int n_channels = s.num_channels();
  std::vector<double> q(n_channels, s.params.bs_power() / n_channels);
  JointResult out;
  for (int it = 1; it <= max_iters; ++it) {
    MatchResult match = da_match(s, c, q);
    if (!out.history.empty() &&
        match.assignment == out.history.back().assignment) {
      out.repeated = true;
      break;
    }
    SolveReport report;
    try {
      report = solve(c, make_solve_input(s, to_pairing(match.assignment)),
                     options);
    } catch (const InfeasibleError& e) {
      throw InfeasibleError("iteration " + std::to_string(it) + ": " +
                                e.what(),
                            e.channels(), e.required());
    }
    q = report.budgets.q;
    out.history.push_back({match.assignment, q, report.objective});
    out.report = std::move(report);
    out.match = std::move(match);
  }
  return out;
}

MatchResult cup_assign(const CnrMatrix& cnr) {
  check_shape(cnr);
  const int n_users = cnr.users();
  const int n_channels = cnr.channels();
  std::vector<double> mean(n_users, 0.0);
  for (int n = 0; n < n_users; ++n) {
    for (int m = 0; m < n_channels; ++m) mean[n] += cnr(n, m);
    mean[n] /= n_channels;
  }
  std::vector<int> rank(n_users);
  std::iota(rank.begin(), rank.end(), 0);
  std::stable_sort(rank.begin(), rank.end(),
                   [&](int a, int b) { return mean[a] > mean[b]; });
  MatchResult out;
  out.assignment.resize(n_channels);
  for (int k = 0; k < n_channels; ++k) {
    const int hi = rank[k];
    const int lo = rank[n_users - 1 - k];
    const bool hi_strong = cnr(hi, k) > cnr(lo, k) ||
                           (cnr(hi, k) == cnr(lo, k) && hi < lo);
    out.assignment[k] = hi_strong ? UserPair{hi, lo} : UserPair{lo, hi};
  }
  return out;
}

ExhaustiveResult exhaustive_assign(Criterion c, const Scenario& s,
                                   const SolveOptions& options) {
  check_shape(s.cnr);
  if (s.num_users() > kMaxExhaustiveUsers) {
    throw DomainError("exhaustive search over N = " +
                      std::to_string(s.num_users()) + " users would need " +
                      std::to_string(oracle::assignment_count(s.num_users())) +
                      " assignments; the limit is N <= " +
                      std::to_string(kMaxExhaustiveUsers));
  }
  ExhaustiveResult out;
  double best = kNegInf;
  std::string last_failure;
  oracle::for_each_assignment(
      s.num_users(), s.num_channels(), [&](const oracle::Pairing& pairing) {
        ++out.evaluated;
        SolveReport r;
        try {
          r = solve(c, make_solve_input(s, pairing), options);
        } catch (const InfeasibleError& e) {
          last_failure = e.what();
          return;
        }
        ++out.feasible;
        if (out.feasible == 1 || r.objective > best) {
          best = r.objective;
          out.assignment = r.allocation.assignment;
          out.report = std::move(r);
        }
      });
  if (out.feasible == 0) {
    throw InfeasibleError("no assignment is feasible (" + last_failure + ")");
  }
  return out;
}

OfdmaMode ofdma_mode_for(Criterion c) {
  switch (c) {
    case Criterion::kMaxMinFairness: return OfdmaMode::kMaxMin;
    case Criterion::kWeightedEnergyEff:
    case Criterion::kQosEnergyEff: return OfdmaMode::kEnergyEfficiency;
    default: return OfdmaMode::kSumRate;
  }
}

OfdmaResult ofdma_rates(OfdmaMode mode, const std::vector<double>& cnrs,
                        double subband_bw, double total_power,
                        double circuit_power) {
  if (cnrs.empty()) throw DomainError("OFDMA needs at least one user");
  for (double g : cnrs) {
    if (!(g > 0.0) || !std::isfinite(g)) {
      throw DomainError("OFDMA CNRs must be positive");
    }
  }
  if (!(total_power > 0.0)) throw DomainError("total power must be positive");
  OfdmaResult r;
  WaterfillSpec spec;
  spec.total = total_power;
  for (double g : cnrs) {
    spec.channels.push_back({subband_bw / std::numbers::ln2, 1.0 / g, 0.0});
  }
  switch (mode) {
    case OfdmaMode::kSumRate: {
      WaterfillResult wf = projected_waterfill(spec);
      r.powers = wf.budgets.q;
      r.iterations = wf.iterations;
      break;
    }
    case OfdmaMode::kMaxMin: {
      // Equal rates need equal SNRs: p_n = s / G_n with sum p_n = P.
      double inv = 0.0;
      for (double g : cnrs) inv += 1.0 / g;
      const double snr = total_power / inv;
      for (double g : cnrs) r.powers.push_back(snr / g);
      break;
    }
    case OfdmaMode::kEnergyEfficiency: {
      auto inner = [&](double alpha) {
        if (alpha > 0.0) {
          std::vector<double> p = waterfill_at(spec, alpha);
          if (std::accumulate(p.begin(), p.end(), 0.0) <= total_power) {
            return Budgets{std::move(p), total_power};
          }
        }
        return projected_waterfill(spec).budgets;
      };
      auto rate = [&](const Budgets& b) {
        double sum = 0.0;
        for (std::size_t n = 0; n < cnrs.size(); ++n) {
          sum += subband_bw * std::log2(1.0 + b.q[n] * cnrs[n]);
        }
        return sum;
      };
      auto power = [&](const Budgets& b) { return circuit_power + b.sum(); };
      DinkelbachState st = dinkelbach(inner, rate, power);
      r.powers = st.budgets.q;
      r.iterations = st.iteration;
      break;
    }
  }
  finish_metrics(r, subband_bw, cnrs, circuit_power);
  return r;
}

OfdmaResult ofdma_baseline(OfdmaMode mode, const Scenario& s) {
  check_shape(s.cnr);
  const int n_users = s.num_users();
  const int n_channels = s.num_channels();
  const int halves = n_users / n_channels;
  // Noise scales with the subband width B/N instead of B/M.
  const double scale = static_cast<double>(n_users) / n_channels;
  std::vector<int> free_slots(n_channels, halves);
  std::vector<int> channel(n_users, -1);
  std::vector<double> g(n_users);
  for (int n = 0; n < n_users; ++n) {
    int best = -1;
    for (int m = 0; m < n_channels; ++m) {
      if (free_slots[m] == 0) continue;
      if (best < 0 || s.cnr(n, m) > s.cnr(n, best)) best = m;
    }
    --free_slots[best];
    channel[n] = best;
    g[n] = s.cnr(n, best) * scale;
  }
  OfdmaResult r = ofdma_rates(mode, g, s.params.bandwidth / n_users,
                              s.params.bs_power(), s.params.circuit_power());
  r.channel = std::move(channel);
  return r;
}

}  // namespace noma
