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

#include <utility>
#include <vector>

namespace noma {

// The two users sharing one channel, ordered so that gamma_strong >=
// gamma_weak. CNRs are |h|^2 / sigma^2 in 1/W; QoS thresholds in bit/s.
struct ChannelPair {
  double gamma_strong = 1.0;
  double gamma_weak = 1.0;
  double weight_strong = 1.0;
  double weight_weak = 1.0;
  double qos_strong = 0.0;
  double qos_weak = 0.0;

  // Throws DomainError when the ordering, positivity or sign invariants fail.
  void validate() const;
};

// Powers for the strong and weak user of one channel. `stable` is the
// SIC-stability verdict: the strong user receives strictly less power.
struct PowerSplit {
  double p_strong = 0.0;
  double p_weak = 0.0;
  bool stable = false;

  static PowerSplit of(double p_strong, double p_weak) {
    return {p_strong, p_weak, p_strong < p_weak};
  }
  double total() const { return p_strong + p_weak; }
};

struct Budgets {
  std::vector<double> q;
  double total = 0.0;

  double sum() const;
};

struct SystemParams {
  double bandwidth_total = 5e6;  // Hz
  int num_channels = 1;
  double noise_psd = 0.0;        // W/Hz
  double circuit_power = 1.0;    // W
  double bs_power = 1.0;         // W

  double channel_bandwidth() const { return bandwidth_total / num_channels; }
  double noise_power() const {
    return bandwidth_total * noise_psd / num_channels;
  }
};

struct UserPair {
  int strong = -1;
  int weak = -1;
  bool operator==(const UserPair&) const = default;
};

struct Allocation {
  std::vector<UserPair> assignment;  // indexed by channel
  std::vector<PowerSplit> splits;    // indexed by channel
  std::vector<double> rates;         // indexed by user, bit/s
  double min_rate = 0.0;
  double sum_rate = 0.0;
  double weighted_sum_rate = 0.0;
  double transmit_power = 0.0;
  double energy_efficiency = 0.0;  // sum_rate / (P_T + transmit_power)
  bool stable_all = false;
};

struct PairRates {
  double strong = 0.0;
  double weak = 0.0;
};

// Two-user superposition rates with SIC at the strong user:
//   R_strong = bc log2(1 + p_s G_s)
//   R_weak   = bc log2(1 + p_w G_w / (p_s G_w + 1))
PairRates rate_pair(const ChannelPair& pair, const PowerSplit& split,
                    double bc);

double dbm_to_watts(double dbm);
double watts_to_dbm(double watts);
// dBm/Hz -> W/Hz.
inline double dbm_per_hz_to_watts_per_hz(double dbm_hz) {
  return dbm_to_watts(dbm_hz);
}

// A = 2^{R/bc}: the SNR-domain form of a rate threshold.
double qos_snr(double rate_bps, double bc);

}  // namespace noma
