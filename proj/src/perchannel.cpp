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

#include "noma/perchannel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "noma/errors.hpp"

namespace noma {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void check_budget(double q) {
  if (!(q >= 0.0) || !std::isfinite(q)) {
    throw DomainError("channel budget must be finite and non-negative");
  }
}

double bits(double x) { return std::log2(x); }

SplitResult evaluate(Criterion c, const ChannelPair& pair, double p_strong,
                     double q, double bc, Stability verdict) {
  SplitResult r;
  r.split = PowerSplit::of(p_strong, q - p_strong);
  r.stability = verdict;
  const PairRates rates = rate_pair(pair, r.split, bc);
  switch (c) {
    case Criterion::kMaxMinFairness:
      r.channel_value = std::min(rates.strong, rates.weak);
      break;
    case Criterion::kWeightedSumRate:
    case Criterion::kWeightedEnergyEff:
      r.channel_value =
          pair.weight_strong * rates.strong + pair.weight_weak * rates.weak;
      break;
    case Criterion::kQosSumRate:
    case Criterion::kQosEnergyEff:
      r.channel_value = rates.strong + rates.weak;
      break;
  }
  return r;
}

// Root of G_s G_w^2 x^2 + (G_s + G_w) x - G_w q = 0 written without the
// cancellation of the textbook form.
double equal_rate_power(const ChannelPair& pair, double q) {
  const double gs = pair.gamma_strong;
  const double gw = pair.gamma_weak;
  const double s = std::sqrt((gs + gw) * (gs + gw) + 4.0 * gs * gw * gw * q);
  return 2.0 * gw * q / ((gs + gw) + s);
}

}  // namespace

std::string_view to_string(Stability s) {
  switch (s) {
    case Stability::kStable: return "stable";
    case Stability::kUnstableEqualSplit: return "unstable-equal-split";
    case Stability::kInfeasibleQos: return "infeasible-qos";
    case Stability::kWeakOnly: return "weak-only";
  }
  return "?";
}

SplitResult mmf_split(const ChannelPair& pair, double q, double bc) {
  pair.validate();
  check_budget(q);
  if (q == 0.0) {
    return {PowerSplit::of(0.0, 0.0), 0.0, Stability::kUnstableEqualSplit};
  }
  SplitResult r = evaluate(Criterion::kMaxMinFairness, pair,
                           equal_rate_power(pair, q), q, bc,
                           Stability::kStable);
  r.channel_value = channel_value(Criterion::kMaxMinFairness, pair, q, bc);
  return r;
}

double wsr_root(const ChannelPair& pair) {
  const double gs = pair.gamma_strong;
  const double gw = pair.gamma_weak;
  const double ws = pair.weight_strong;
  const double ww = pair.weight_weak;
  return (ww * gw - ws * gs) / (gs * gw * (ws - ww));
}

bool wsr_weights_admissible(const ChannelPair& pair) {
  const double ratio = pair.weight_weak / pair.weight_strong;
  return ratio > 1.0 && ratio < pair.gamma_strong / pair.gamma_weak;
}

SplitResult wsr_split(const ChannelPair& pair, double q, double bc) {
  pair.validate();
  check_budget(q);
  const Criterion c = Criterion::kWeightedSumRate;
  const double ratio = pair.weight_weak / pair.weight_strong;
  if (ratio <= 1.0) {
    // Objective is nondecreasing in p_strong up to the order boundary.
    return evaluate(c, pair, 0.5 * q, q, bc, Stability::kUnstableEqualSplit);
  }
  if (ratio >= pair.gamma_strong / pair.gamma_weak) {
    // Objective is decreasing in p_strong on the whole interval.
    return evaluate(c, pair, 0.0, q, bc, Stability::kWeakOnly);
  }
  const double omega = wsr_root(pair);
  if (!(q > 2.0 * omega)) {
    return evaluate(c, pair, 0.5 * q, q, bc, Stability::kUnstableEqualSplit);
  }
  SplitResult r = evaluate(c, pair, omega, q, bc, Stability::kStable);
  r.channel_value = channel_value(c, pair, q, bc);
  return r;
}

double qos_floor(const ChannelPair& pair, double bc) {
  const double a_s = qos_snr(pair.qos_strong, bc);
  const double a_w = qos_snr(pair.qos_weak, bc);
  return a_w * (a_s - 1.0) / pair.gamma_strong + (a_w - 1.0) / pair.gamma_weak;
}

SplitResult qos_split(const ChannelPair& pair, double q, double bc) {
  pair.validate();
  check_budget(q);
  const Criterion c = Criterion::kQosSumRate;
  const double a_s = qos_snr(pair.qos_strong, bc);
  const double a_w = qos_snr(pair.qos_weak, bc);
  // Feasible strong powers: [(A_s-1)/G_s, xi] from the two rate thresholds,
  // intersected with the order constraint p_strong <= q/2.
  const double lowest = (a_s - 1.0) / pair.gamma_strong;
  const double xi = (pair.gamma_weak * q - a_w + 1.0) / (a_w * pair.gamma_weak);
  const double highest = std::min(xi, 0.5 * q);
  // At q = Upsilon the interval is a single point; allow for rounding.
  const double slack = 1e-12 * std::max(q, 1.0);
  if (q < qos_floor(pair, bc) - slack || lowest > highest + slack) {
    SplitResult r;
    r.split = PowerSplit::of(0.5 * q, 0.5 * q);
    r.channel_value = -kInf;
    r.stability = Stability::kInfeasibleQos;
    return r;
  }
  // The sum rate is nondecreasing in p_strong, so the top of the interval wins.
  if (xi < 0.5 * q) {
    SplitResult r = evaluate(c, pair, xi, q, bc, Stability::kStable);
    if (a_w >= 2.0) r.channel_value = channel_value(c, pair, q, bc);
    return r;
  }
  return evaluate(c, pair, 0.5 * q, q, bc, Stability::kUnstableEqualSplit);
}

SplitResult optimal_split(Criterion c, const ChannelPair& pair, double q,
                          double bc) {
  switch (c) {
    case Criterion::kMaxMinFairness: return mmf_split(pair, q, bc);
    case Criterion::kWeightedSumRate:
    case Criterion::kWeightedEnergyEff: return wsr_split(pair, q, bc);
    case Criterion::kQosSumRate:
    case Criterion::kQosEnergyEff: return qos_split(pair, q, bc);
  }
  throw DomainError("unknown criterion");
}

double channel_value(Criterion c, const ChannelPair& pair, double q,
                     double bc) {
  pair.validate();
  check_budget(q);
  const double gs = pair.gamma_strong;
  const double gw = pair.gamma_weak;
  switch (c) {
    case Criterion::kMaxMinFairness: {
      // bc log2((G_w - G_s + sqrt((G_s+G_w)^2 + 4 G_s G_w^2 q)) / (2 G_w)),
      // whose argument equals 1 + G_s * (equal-rate strong power).
      return bc * std::log1p(gs * equal_rate_power(pair, q)) /
             std::numbers::ln2;
    }
    case Criterion::kWeightedSumRate:
    case Criterion::kWeightedEnergyEff: {
      if (!wsr_weights_admissible(pair) || !(q > 2.0 * wsr_root(pair))) {
        return wsr_split(pair, q, bc).channel_value;
      }
      const double omega = wsr_root(pair);
      return pair.weight_strong * bc * bits(1.0 + omega * gs) +
             pair.weight_weak * bc * bits((q * gw + 1.0) / (omega * gw + 1.0));
    }
    case Criterion::kQosSumRate:
    case Criterion::kQosEnergyEff: {
      const double a_w = qos_snr(pair.qos_weak, bc);
      if (a_w < 2.0) return qos_split(pair, q, bc).channel_value;
      if (q < qos_floor(pair, bc) - 1e-12 * std::max(q, 1.0)) return -kInf;
      const double w =
          bc * bits((a_w * gw - a_w * gs + gs * gw * q + gs) / (a_w * gw));
      return w + pair.qos_weak;
    }
  }
  throw DomainError("unknown criterion");
}

double channel_marginal(Criterion c, const ChannelPair& pair, double q,
                        double bc) {
  const double gs = pair.gamma_strong;
  const double gw = pair.gamma_weak;
  const double scale = bc / std::numbers::ln2;
  switch (c) {
    case Criterion::kMaxMinFairness: {
      const double s = std::sqrt((gs + gw) * (gs + gw) + 4.0 * gs * gw * gw * q);
      return scale * (2.0 * gs * gw * gw / s) / (gw - gs + s);
    }
    case Criterion::kWeightedSumRate:
    case Criterion::kWeightedEnergyEff:
      return pair.weight_weak * scale / (q + 1.0 / gw);
    case Criterion::kQosSumRate:
    case Criterion::kQosEnergyEff: {
      const double a_w = qos_snr(pair.qos_weak, bc);
      return scale / (q + 1.0 / gw + a_w / gs - a_w / gw);
    }
  }
  throw DomainError("unknown criterion");
}

StabilityReport sic_stability_system(Criterion c,
                                     std::span<const ChannelPair> pairs,
                                     double total_power, double bc) {
  StabilityReport report;
  report.channels.reserve(pairs.size());
  for (const ChannelPair& pair : pairs) {
    pair.validate();
    ChannelCondition cond;
    switch (c) {
      case Criterion::kMaxMinFairness:
        break;
      case Criterion::kWeightedSumRate:
      case Criterion::kWeightedEnergyEff:
        cond.structural_ok = wsr_weights_admissible(pair);
        cond.floor = cond.structural_ok ? 2.0 * wsr_root(pair) : 0.0;
        break;
      case Criterion::kQosSumRate:
      case Criterion::kQosEnergyEff:
        cond.structural_ok = qos_snr(pair.qos_weak, bc) >= 2.0;
        cond.floor = qos_floor(pair, bc);
        break;
    }
    report.required_power += cond.floor;
    report.stable = report.stable && cond.structural_ok;
    report.channels.push_back(cond);
  }
  switch (c) {
    case Criterion::kMaxMinFairness:
      report.stable = total_power > 0.0;
      break;
    case Criterion::kWeightedSumRate:
    case Criterion::kWeightedEnergyEff:
      report.stable = report.stable && total_power > report.required_power;
      break;
    case Criterion::kQosSumRate:
    case Criterion::kQosEnergyEff:
      report.stable = report.stable && total_power >= report.required_power;
      break;
  }
  return report;
}

}  // namespace noma
