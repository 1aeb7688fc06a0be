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
#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>
#include <string>

#include "noma/assignment.hpp"
#include "noma/cli.hpp"
#include "noma/oracle.hpp"
#include "noma/perchannel.hpp"

namespace noma::cli {
namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();
constexpr std::uint64_t kPerChannelStream = 0x5043;
constexpr std::uint64_t kBudgetStream = 0x4255;

double log_uniform(Rng& rng, double lo, double hi) {
  return lo * std::pow(hi / lo, rng.uniform());
}

std::string fmt(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.9g", x);
  return buf;
}

// Objective at p with thresholds checked to a relative rounding slack, so
// a split placed exactly on a QoS boundary is not rejected by the last ulp.
double objective_with_slack(Criterion c, const ChannelPair& pair, double q,
                            double p, double bc) {
  const PairRates r = rate_pair(pair, PowerSplit::of(p, q - p), bc);
  switch (c) {
    case Criterion::kMaxMinFairness:
      return std::min(r.strong, r.weak);
    case Criterion::kWeightedSumRate:
    case Criterion::kWeightedEnergyEff:
      return pair.weight_strong * r.strong + pair.weight_weak * r.weak;
    case Criterion::kQosSumRate:
    case Criterion::kQosEnergyEff: {
      const double slack = 1e-9;
      if (r.strong < pair.qos_strong * (1.0 - slack) - slack ||
          r.weak < pair.qos_weak * (1.0 - slack) - slack) {
        return kNegInf;
      }
      return r.strong + r.weak;
    }
  }
  return kNegInf;
}

// Largest change of f across one grid step around x, a bound on how far the
// grid maximum can sit below the continuous one.
double local_variation(const std::function<double(double)>& f, double x,
                       double step, double lo, double hi) {
  const double fx = f(x);
  double v = 0.0;
  for (double y : {x - step, x + step}) {
    if (y < lo || y > hi) continue;
    const double fy = f(y);
    if (std::isfinite(fy)) v = std::max(v, std::abs(fy - fx));
  }
  return v;
}

ChannelPair random_pair(Rng& rng, double min_ratio) {
  ChannelPair p;
  p.gamma_weak = log_uniform(rng, 0.1, 100.0);
  p.gamma_strong = p.gamma_weak * log_uniform(rng, min_ratio, 100.0);
  p.weight_strong = 0.9;
  p.weight_weak = 1.1;
  return p;
}

}  // namespace

VerifyOutcome verify_perchannel(int seeds, std::uint64_t base_seed,
                                std::int64_t grid_points) {
  VerifyOutcome out;
  out.suite = "perchannel";
  const double bc = 1.0;
  for (int i = 0; i < seeds; ++i) {
    Rng rng(derive_seed(base_seed, kPerChannelStream,
                        static_cast<std::uint64_t>(i)));
    for (Criterion c : {Criterion::kMaxMinFairness,
                        Criterion::kWeightedSumRate,
                        Criterion::kQosSumRate}) {
      ChannelPair pair = random_pair(rng, 1.0);
      if (uses_qos(c)) {
        pair.qos_strong = 2.0 * rng.uniform();
        pair.qos_weak = 2.0 * rng.uniform();
      }
      const double q = log_uniform(rng, 0.1, 100.0);
      const SplitResult closed = optimal_split(c, pair, q, bc);
      const auto f = oracle::split_objective(c, pair, q, bc);
      const oracle::GridPoint grid = oracle::grid_split(f, q, grid_points);
      ++out.checks;
      const double achieved =
          objective_with_slack(c, pair, q, closed.split.p_strong, bc);
      const std::string where = "seed " + std::to_string(i) + " " +
                                std::string(to_string(c)) + " q=" + fmt(q);
      if (!std::isfinite(grid.value)) {
        // Only a feasible window narrower than the grid step can hide.
        if (std::isfinite(achieved) && q / 2.0 / grid_points > 1e-3) {
          out.failures.push_back(where + ": grid infeasible, closed form not");
        }
        continue;
      }
      const double tol =
          local_variation(f, grid.argmax, grid.resolution, 0.0, q / 2.0) +
          1e-9 * (1.0 + std::abs(grid.value));
      if (!(achieved >= grid.value - tol)) {
        out.failures.push_back(where + ": closed form " + fmt(achieved) +
                               " below grid " + fmt(grid.value));
      }
    }
  }
  return out;
}

VerifyOutcome verify_budget(int seeds, std::uint64_t base_seed,
                            std::int64_t grid_points) {
  VerifyOutcome out;
  out.suite = "budget";
  const double bc = 1.0;
  const Criterion criteria[] = {Criterion::kMaxMinFairness,
                                Criterion::kWeightedSumRate,
                                Criterion::kQosSumRate};
  for (int i = 0; i < seeds; ++i) {
    Rng rng(derive_seed(base_seed, kBudgetStream,
                        static_cast<std::uint64_t>(i)));
    const int m_count = 1 + i % 3;
    const Criterion c = criteria[(i / 3) % 3];
    std::vector<ChannelPair> pairs;
    std::vector<double> floors(m_count, 0.0);
    double floor_sum = 0.0;
    for (int m = 0; m < m_count; ++m) {
      ChannelPair p = random_pair(rng, 1.5);
      if (c == Criterion::kWeightedSumRate) {
        // Strong-user stationary point of the weighted objective.
        const double omega =
            (p.weight_weak * p.gamma_weak - p.weight_strong * p.gamma_strong) /
            (p.gamma_strong * p.gamma_weak *
             (p.weight_strong - p.weight_weak));
        floors[m] = 2.0 * omega * (1.0 + 1e-6);
      }
      if (c == Criterion::kQosSumRate) {
        p.qos_strong = 0.2 + 1.8 * rng.uniform();
        p.qos_weak = 1.0 + rng.uniform();
        const double as = std::exp2(p.qos_strong / bc);
        const double aw = std::exp2(p.qos_weak / bc);
        floor_sum += aw * (as - 1.0) / p.gamma_strong + (aw - 1.0) / p.gamma_weak;
      }
      floor_sum += floors[m];
      pairs.push_back(p);
    }
    const double total = floor_sum + log_uniform(rng, 0.1, 100.0);

    std::vector<double> q;
    switch (c) {
      case Criterion::kMaxMinFairness:
        q = mmf_budgets(pairs, total, bc).budgets.q;
        break;
      case Criterion::kWeightedSumRate:
        q = sr1_budgets(pairs, total, bc).budgets.q;
        break;
      default:
        q = sr2_budgets(pairs, total, bc).budgets.q;
        break;
    }

    std::vector<std::function<double(double)>> values;
    for (const ChannelPair& p : pairs) {
      values.push_back([c, p, bc](double budget) {
        return oracle::search_split(c, p, budget, bc).value;
      });
    }
    const auto aggregate = c == Criterion::kMaxMinFairness
                               ? oracle::Aggregate::kMin
                               : oracle::Aggregate::kSum;
    const oracle::BudgetGrid grid =
        oracle::grid_budget(values, total, floors, grid_points, aggregate);
    ++out.checks;
    const std::string where = "seed " + std::to_string(i) + " " +
                              std::string(to_string(c)) + " M=" +
                              std::to_string(m_count);
    if (!grid.feasible) {
      out.failures.push_back(where + ": grid found no feasible budgets");
      continue;
    }
    double achieved = aggregate == oracle::Aggregate::kMin
                          ? std::numeric_limits<double>::infinity()
                          : 0.0;
    double tol = 1e-9 * (1.0 + std::abs(grid.value));
    for (int m = 0; m < m_count; ++m) {
      const double v = objective_with_slack(
          c, pairs[m], q[m], optimal_split(c, pairs[m], q[m], bc).split.p_strong,
          bc);
      achieved = aggregate == oracle::Aggregate::kMin ? std::min(achieved, v)
                                                      : achieved + v;
      tol += local_variation(values[m], grid.q[m], grid.resolution, 0.0,
                             total);
    }
    if (!(achieved >= grid.value - tol)) {
      out.failures.push_back(where + ": solver " + fmt(achieved) +
                             " below grid " + fmt(grid.value));
    }
  }
  return out;
}

VerifyOutcome verify_assignment(int seeds, const Config& cfg,
                                double max_gap_allowed) {
  VerifyOutcome out;
  out.suite = "assignment";
  double gap_sum = 0.0;
  int gap_count = 0;
  for (int i = 0; i < seeds; ++i) {
    ScenarioParams p = cfg.scenario;
    p.num_users = 6;
    p.num_channels = 3;
    p.seed = trial_seed(cfg.scenario.seed, i, 6);
    p.bs_power_dbm = watts_to_dbm(2.0 + 2.0 * (i % 6));
    const Scenario s = generate(p);
    for (Criterion c : cfg.criteria) {
      const std::string where = "seed " + std::to_string(p.seed) + " " +
                                std::string(to_string(c)) + " P=" +
                                fmt(p.bs_power_dbm) + " dBm";
      double best = 0.0;
      try {
        best = exhaustive_assign(c, s, cfg.solve).report.objective;
      } catch (const InfeasibleError&) {
        ++out.skipped;
        continue;
      }
      double gap = 1.0;
      try {
        const JointResult j = joint_optimize(c, s, cfg.joint_iters, cfg.solve);
        gap = (best - j.report.objective) / std::abs(best);
      } catch (const InfeasibleError&) {
        gap = 1.0;
      }
      ++out.checks;
      gap_sum += gap;
      ++gap_count;
      out.max_gap = std::max(out.max_gap, gap);
      if (gap > max_gap_allowed) {
        out.failures.push_back(where + ": gap " + fmt(100.0 * gap) + "%");
      } else if (gap < -1e-9) {
        out.failures.push_back(where + ": matching beat exhaustive search by " +
                               fmt(-100.0 * gap) + "%");
      }
    }
  }
  out.mean_gap = gap_count ? gap_sum / gap_count : 0.0;
  return out;
}

int run_verify(const std::string& suite, int seeds, const Config& cfg,
               std::ostream& out, std::ostream& err) {
  if (seeds < 1) {
    err << "error: seeds must be >= 1\n";
    return kConfigFailure;
  }
  VerifyOutcome r;
  try {
    if (suite == "perchannel") {
      r = verify_perchannel(seeds, cfg.scenario.seed);
    } else if (suite == "budget") {
      r = verify_budget(seeds, cfg.scenario.seed);
    } else if (suite == "assignment") {
      r = verify_assignment(seeds, cfg);
    } else {
      err << "error: unknown suite '" << suite
          << "' (expected perchannel, budget or assignment)\n";
      return kConfigFailure;
    }
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kVerificationFailure;
  }
  out << "suite " << r.suite << ": " << r.checks << " checks, "
      << r.failures.size() << " failures";
  if (r.skipped) out << ", " << r.skipped << " skipped (no feasible assignment)";
  out << "\n";
  if (r.suite == "assignment") {
    out << "mean gap " << fmt(100.0 * r.mean_gap) << "%, max gap "
        << fmt(100.0 * r.max_gap) << "%\n";
  }
  for (const std::string& f : r.failures) out << "FAIL " << f << "\n";
  out << (r.passed() ? "PASS" : "FAIL") << "\n";
  return r.passed() ? kSuccess : kVerificationFailure;
}

}  // namespace noma::cli
