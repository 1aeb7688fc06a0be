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

#include "noma/budget.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <sstream>
#include <string>

namespace noma {
namespace {

constexpr double kInitialLow = 1e-12;
constexpr double kInitialHigh = 1.0;
constexpr double kRelativeWidth = 1e-12;
constexpr int kMaxBracketSteps = 2100;

struct Root {
  double x = 0.0;
  int iterations = 0;
};

// Solves sum_at(x) = target for a nonincreasing sum_at on (0, inf):
// bracket from [1e-12, 1] outwards by halving/doubling, then bisect
// (geometrically while the bracket spans more than a factor two).
Root bisect_decreasing(const std::function<double(double)>& sum_at,
                       double target) {
  Root root;
  double lo = kInitialLow;
  double hi = kInitialHigh;
  for (int k = 0; sum_at(lo) < target; ++k, ++root.iterations) {
    if (k == kMaxBracketSteps || lo == 0.0) {
      throw InfeasibleError("total cannot be reached for any multiplier");
    }
    hi = lo;
    lo *= 0.5;
  }
  for (int k = 0; sum_at(hi) > target; ++k, ++root.iterations) {
    if (k == kMaxBracketSteps || !std::isfinite(hi)) {
      throw InfeasibleError("total is below the limit of the channel budgets");
    }
    lo = hi;
    hi *= 2.0;
  }
  while (hi - lo > kRelativeWidth * hi) {
    const double mid = hi > 2.0 * lo ? std::sqrt(lo * hi) : 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if (sum_at(mid) > target) {
      lo = mid;
    } else {
      hi = mid;
    }
    ++root.iterations;
  }
  root.x = 0.5 * (lo + hi);
  return root;
}

std::string channel_list(const std::vector<int>& channels) {
  std::ostringstream os;
  for (std::size_t i = 0; i < channels.size(); ++i) {
    os << (i ? "," : "") << channels[i];
  }
  return os.str();
}

void check_total(double total) {
  if (!(total > 0.0) || !std::isfinite(total)) {
    throw DomainError("total power must be positive and finite");
  }
}

void check_pairs(std::span<const ChannelPair> pairs) {
  if (pairs.empty()) throw DomainError("at least one channel is required");
  for (const ChannelPair& p : pairs) p.validate();
}

double sum_of(const std::vector<double>& v) {
  return std::accumulate(v.begin(), v.end(), 0.0);
}

WaterfillSpec sr1_spec(std::span<const ChannelPair> pairs, double total,
                       double bc, double theta_margin) {
  std::vector<int> bad;
  WaterfillSpec spec;
  spec.total = total;
  for (std::size_t m = 0; m < pairs.size(); ++m) {
    const ChannelPair& p = pairs[m];
    if (!wsr_weights_admissible(p)) {
      bad.push_back(static_cast<int>(m));
      continue;
    }
    spec.channels.push_back({p.weight_weak * bc / std::numbers::ln2,
                             1.0 / p.gamma_weak,
                             2.0 * wsr_root(p) * (1.0 + theta_margin)});
  }
  if (!bad.empty()) {
    throw InfeasibleError(
        "weight ratio condition 1 < W_weak/W_strong < G_strong/G_weak fails "
        "on channels " + channel_list(bad),
        bad);
  }
  double floors = 0.0;
  for (const auto& c : spec.channels) floors += c.floor;
  if (floors > total) {
    std::ostringstream os;
    os << "total power " << total << " W is below the sum of stability floors "
       << "2*sum(Omega)*(1+margin) = " << floors << " W";
    throw InfeasibleError(os.str(), {}, floors);
  }
  return spec;
}

WaterfillSpec sr2_spec(std::span<const ChannelPair> pairs, double total,
                       double bc, double weight_override) {
  std::vector<int> bad;
  WaterfillSpec spec;
  spec.total = total;
  for (std::size_t m = 0; m < pairs.size(); ++m) {
    const ChannelPair& p = pairs[m];
    const double a_w = qos_snr(p.qos_weak, bc);
    if (a_w < 2.0) {
      bad.push_back(static_cast<int>(m));
      continue;
    }
    const double weight = weight_override > 0.0 ? weight_override : 1.0;
    spec.channels.push_back(
        {weight * bc / std::numbers::ln2,
         1.0 / p.gamma_weak + a_w / p.gamma_strong - a_w / p.gamma_weak,
         qos_floor(p, bc)});
  }
  if (!bad.empty()) {
    throw InfeasibleError(
        "weak-user QoS condition A_weak >= 2 fails on channels " +
            channel_list(bad),
        bad);
  }
  double floors = 0.0;
  for (const auto& c : spec.channels) floors += c.floor;
  if (floors > total) {
    std::ostringstream os;
    os << "total power " << total << " W is below the QoS floor sum(Upsilon) = "
       << floors << " W";
    throw InfeasibleError(os.str(), {}, floors);
  }
  return spec;
}

}  // namespace

std::vector<double> waterfill_at(const WaterfillSpec& spec, double nu) {
  std::vector<double> q(spec.channels.size());
  for (std::size_t m = 0; m < q.size(); ++m) {
    const WaterfillChannel& c = spec.channels[m];
    q[m] = std::max(c.numerator / nu - c.intercept, c.floor);
  }
  return q;
}

WaterfillResult projected_waterfill(const WaterfillSpec& spec) {
  if (spec.channels.empty()) throw DomainError("waterfilling needs channels");
  check_total(spec.total);
  double floors = 0.0;
  for (const auto& c : spec.channels) {
    if (!(c.numerator > 0.0) || !(c.floor >= 0.0)) {
      throw DomainError("waterfilling needs positive numerators and floors >= 0");
    }
    floors += c.floor;
  }
  if (floors > spec.total) {
    std::ostringstream os;
    os << "sum of floors " << floors << " exceeds the total " << spec.total;
    throw InfeasibleError(os.str(), {}, floors);
  }

  WaterfillResult out;
  const Root root = bisect_decreasing(
      [&](double nu) { return sum_of(waterfill_at(spec, nu)); }, spec.total);
  double nu = root.x;
  std::vector<double> q = waterfill_at(spec, nu);

  // The sum is affine in 1/nu once the active set is fixed: solve it exactly.
  double num = 0.0;
  double rest = spec.total;
  for (std::size_t m = 0; m < q.size(); ++m) {
    const WaterfillChannel& c = spec.channels[m];
    if (c.numerator / nu - c.intercept > c.floor) {
      num += c.numerator;
      rest += c.intercept;
    } else {
      rest -= c.floor;
    }
  }
  if (num > 0.0 && rest > 0.0) {
    const double exact = num / rest;
    std::vector<double> polished = waterfill_at(spec, exact);
    if (std::abs(sum_of(polished) - spec.total) <=
        std::abs(sum_of(q) - spec.total)) {
      nu = exact;
      q = std::move(polished);
    }
  }

  out.clamped.resize(q.size());
  for (std::size_t m = 0; m < q.size(); ++m) {
    const WaterfillChannel& c = spec.channels[m];
    out.clamped[m] = !(c.numerator / nu - c.intercept > c.floor);
  }
  out.budgets = {std::move(q), spec.total};
  out.multiplier = nu;
  out.iterations = root.iterations;
  return out;
}

MmfBudgets mmf_budgets(std::span<const ChannelPair> pairs, double total,
                       double bc) {
  check_pairs(pairs);
  check_total(total);
  double inv_strong = 0.0;
  double gap = 0.0;
  for (const ChannelPair& p : pairs) {
    inv_strong += 1.0 / p.gamma_strong;
    gap += (p.gamma_weak - p.gamma_strong) / (p.gamma_strong * p.gamma_weak);
  }
  const double x = gap / (4.0 * inv_strong);
  const double k = bc / (2.0 * inv_strong);
  // Z(lambda) = X + sqrt(X^2 + k / lambda); X <= 0 so use the conjugate.
  auto level = [x, k](double lambda) {
    const double r = k / lambda;
    const double s = std::sqrt(x * x + r);
    return x >= 0.0 ? x + s : r / (s - x);
  };
  auto budgets_at = [&](double z) {
    std::vector<double> q(pairs.size());
    for (std::size_t m = 0; m < pairs.size(); ++m) {
      const ChannelPair& p = pairs[m];
      q[m] = (z * p.gamma_weak + p.gamma_strong) * (z - 1.0) /
             (p.gamma_strong * p.gamma_weak);
    }
    return q;
  };
  const Root root = bisect_decreasing(
      [&](double lambda) { return sum_of(budgets_at(level(lambda))); }, total);
  const double z = level(root.x);
  MmfBudgets out;
  out.budgets = {budgets_at(z), total};
  out.multiplier = root.x;
  out.common_rate = bc * std::log2(z);
  out.iterations = root.iterations;
  return out;
}

WaterfillResult sr1_budgets(std::span<const ChannelPair> pairs, double total,
                            double bc, double theta_margin) {
  check_pairs(pairs);
  check_total(total);
  return projected_waterfill(sr1_spec(pairs, total, bc, theta_margin));
}

WaterfillResult sr2_budgets(std::span<const ChannelPair> pairs, double total,
                            double bc) {
  check_pairs(pairs);
  check_total(total);
  return projected_waterfill(sr2_spec(pairs, total, bc, 0.0));
}

DinkelbachState dinkelbach(
    const std::function<Budgets(double alpha)>& inner,
    const std::function<double(const Budgets&)>& numerator,
    const std::function<double(const Budgets&)>& denominator,
    const DinkelbachOptions& options) {
  if (!(options.delta_rel > 0.0)) throw DomainError("delta must be positive");
  DinkelbachState state;
  double alpha = 0.0;
  for (int it = 1; it <= options.max_iterations; ++it) {
    Budgets q = inner(alpha);
    const double num = numerator(q);
    const double den = denominator(q);
    state.alpha = alpha;
    state.surrogate_value = num - alpha * den;
    state.iteration = it;
    state.budgets = std::move(q);
    state.alpha_history.push_back(alpha);
    if (std::abs(state.surrogate_value) <= options.delta_rel * (1.0 + alpha)) {
      return state;
    }
    alpha = num / den;
  }
  throw ConvergenceError("Dinkelbach iteration did not converge within " +
                             std::to_string(options.max_iterations) +
                             " iterations",
                         state);
}

namespace {

EeBudgets run_ee(Criterion c, std::span<const ChannelPair> pairs,
                 const WaterfillSpec& spec, double circuit_power, double bc,
                 const DinkelbachOptions& options) {
  if (!(circuit_power >= 0.0)) throw DomainError("circuit power must be >= 0");
  double lambda = 0.0;
  auto inner = [&](double alpha) {
    if (alpha > 0.0) {
      std::vector<double> q = waterfill_at(spec, alpha);
      if (sum_of(q) <= spec.total) {
        lambda = 0.0;
        return Budgets{std::move(q), spec.total};
      }
    }
    WaterfillResult wf = projected_waterfill(spec);
    lambda = std::max(wf.multiplier - alpha, 0.0);
    return wf.budgets;
  };
  auto numerator = [&](const Budgets& b) {
    double f = 0.0;
    for (std::size_t m = 0; m < pairs.size(); ++m) {
      f += channel_value(c, pairs[m], b.q[m], bc);
    }
    return f;
  };
  auto denominator = [&](const Budgets& b) { return circuit_power + b.sum(); };
  EeBudgets out;
  out.state = dinkelbach(inner, numerator, denominator, options);
  out.budgets = out.state.budgets;
  // inner() ran last for the returned alpha, so lambda belongs to it.
  out.lambda = lambda;
  return out;
}

}  // namespace

EeBudgets ee1_budgets(std::span<const ChannelPair> pairs, double total,
                      double circuit_power, double bc, double theta_margin,
                      const DinkelbachOptions& options) {
  check_pairs(pairs);
  check_total(total);
  return run_ee(Criterion::kWeightedEnergyEff, pairs,
                sr1_spec(pairs, total, bc, theta_margin), circuit_power, bc,
                options);
}

EeBudgets ee2_budgets(std::span<const ChannelPair> pairs, double total,
                      double circuit_power, double bc, bool literal_weight,
                      const DinkelbachOptions& options) {
  check_pairs(pairs);
  check_total(total);
  // The literal variant carries each channel's own strong-user weight.
  WaterfillSpec spec = sr2_spec(pairs, total, bc, 0.0);
  if (literal_weight) {
    for (std::size_t m = 0; m < pairs.size(); ++m) {
      spec.channels[m].numerator *= pairs[m].weight_strong;
    }
  }
  return run_ee(Criterion::kQosEnergyEff, pairs, spec, circuit_power, bc,
                options);
}

double objective_of(Criterion c, const Allocation& allocation,
                    std::span<const ChannelPair> pairs, double circuit_power) {
  switch (c) {
    case Criterion::kMaxMinFairness:
      return allocation.min_rate;
    case Criterion::kQosSumRate:
      return allocation.sum_rate;
    case Criterion::kWeightedSumRate:
    case Criterion::kWeightedEnergyEff: {
      double weighted = 0.0;
      for (std::size_t m = 0; m < pairs.size(); ++m) {
        const UserPair& u = allocation.assignment[m];
        weighted += pairs[m].weight_strong * allocation.rates[u.strong] +
                    pairs[m].weight_weak * allocation.rates[u.weak];
      }
      if (c == Criterion::kWeightedSumRate) return weighted;
      return weighted / (circuit_power + allocation.transmit_power);
    }
    case Criterion::kQosEnergyEff:
      return allocation.sum_rate /
             (circuit_power + allocation.transmit_power);
  }
  throw DomainError("unknown criterion");
}

SolveReport solve(Criterion c, const SolveInput& input,
                  const SolveOptions& options) {
  const std::span<const ChannelPair> pairs(input.pairs);
  check_pairs(pairs);
  if (input.users.size() != input.pairs.size()) {
    throw ShapeError("one user pair per channel required");
  }
  if (input.num_users != 2 * static_cast<int>(input.pairs.size())) {
    throw ShapeError("NOMA solve needs N = 2M users");
  }
  {
    std::vector<int> seen(static_cast<std::size_t>(input.num_users), 0);
    for (const UserPair& u : input.users) {
      for (int id : {u.strong, u.weak}) {
        if (id < 0 || id >= input.num_users || seen[id]++) {
          throw ShapeError("every user must appear on exactly one channel");
        }
      }
    }
  }

  SolveReport report;
  std::vector<bool> clamped(pairs.size(), false);
  double marginal_scale_extra = 1.0;
  switch (c) {
    case Criterion::kMaxMinFairness: {
      MmfBudgets b = mmf_budgets(pairs, input.total_power, input.bc);
      report.budgets = std::move(b.budgets);
      report.multiplier = b.multiplier;
      report.iterations = b.iterations;
      break;
    }
    case Criterion::kWeightedSumRate:
    case Criterion::kQosSumRate: {
      WaterfillResult wf =
          c == Criterion::kWeightedSumRate
              ? sr1_budgets(pairs, input.total_power, input.bc,
                            options.theta_margin)
              : sr2_budgets(pairs, input.total_power, input.bc);
      report.budgets = std::move(wf.budgets);
      report.multiplier = wf.multiplier;
      report.iterations = wf.iterations;
      clamped = std::move(wf.clamped);
      break;
    }
    case Criterion::kWeightedEnergyEff:
    case Criterion::kQosEnergyEff: {
      EeBudgets ee =
          c == Criterion::kWeightedEnergyEff
              ? ee1_budgets(pairs, input.total_power, input.circuit_power,
                            input.bc, options.theta_margin, options.dinkelbach)
              : ee2_budgets(pairs, input.total_power, input.circuit_power,
                            input.bc, options.ee2_literal_weight,
                            options.dinkelbach);
      report.budgets = std::move(ee.budgets);
      report.multiplier = ee.state.alpha + ee.lambda;
      report.iterations = ee.state.iteration;
      const WaterfillSpec spec =
          c == Criterion::kWeightedEnergyEff
              ? sr1_spec(pairs, input.total_power, input.bc,
                         options.theta_margin)
              : sr2_spec(pairs, input.total_power, input.bc, 0.0);
      for (std::size_t m = 0; m < pairs.size(); ++m) {
        clamped[m] = report.budgets.q[m] <= spec.channels[m].floor;
      }
      if (c == Criterion::kQosEnergyEff && options.ee2_literal_weight) {
        marginal_scale_extra = 0.0;  // per-channel weights, handled below
      }
      break;
    }
  }

  Allocation& a = report.allocation;
  a.assignment = input.users;
  a.rates.assign(static_cast<std::size_t>(input.num_users), 0.0);
  a.stable_all = true;
  for (std::size_t m = 0; m < pairs.size(); ++m) {
    const SplitResult s =
        optimal_split(c, pairs[m], report.budgets.q[m], input.bc);
    const PairRates r = rate_pair(pairs[m], s.split, input.bc);
    a.splits.push_back(s.split);
    a.rates[input.users[m].strong] = r.strong;
    a.rates[input.users[m].weak] = r.weak;
    a.transmit_power += s.split.total();
    a.weighted_sum_rate +=
        pairs[m].weight_strong * r.strong + pairs[m].weight_weak * r.weak;
    report.verdicts.push_back(s.stability);
    a.stable_all = a.stable_all && s.stability == Stability::kStable;
  }
  a.sum_rate = std::accumulate(a.rates.begin(), a.rates.end(), 0.0);
  a.min_rate = *std::min_element(a.rates.begin(), a.rates.end());
  a.energy_efficiency = a.sum_rate / (input.circuit_power + a.transmit_power);
  report.objective = objective_of(c, a, pairs, input.circuit_power);

  if (c == Criterion::kMaxMinFairness) {
    const double hi = *std::max_element(a.rates.begin(), a.rates.end());
    report.kkt_residual =
        (hi - a.min_rate) / std::max(hi, std::numeric_limits<double>::min());
  } else {
    for (std::size_t m = 0; m < pairs.size(); ++m) {
      if (clamped[m]) continue;
      double marginal =
          channel_marginal(c, pairs[m], report.budgets.q[m], input.bc);
      if (marginal_scale_extra == 0.0) marginal *= pairs[m].weight_strong;
      report.kkt_residual =
          std::max(report.kkt_residual,
                   std::abs(marginal - report.multiplier) / report.multiplier);
    }
  }
  return report;
}

}  // namespace noma
