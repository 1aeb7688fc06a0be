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
#include <iosfwd>
#include <random>
#include <vector>

#include "noma/budget.hpp"
#include "noma/model.hpp"

namespace noma {

// Seedable 64-bit generator with platform-independent uniform and normal
// draws (the std distributions are implementation-defined).
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  // Uniform in [0, 1) with 53 random bits.
  double uniform() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }
  // Standard normal via Box-Muller; one engine draw pair per call.
  double normal();

 private:
  std::mt19937_64 engine_;
};

// SplitMix64 finaliser over (base, stream, index): independent sub-streams
// for trials, placement and per-user fading.
std::uint64_t derive_seed(std::uint64_t base, std::uint64_t stream,
                          std::uint64_t index);

struct ScenarioParams {
  int num_users = 10;
  int num_channels = 5;
  double cell_radius = 300.0;     // m
  double min_user_sep = 30.0;     // m
  double min_bs_dist = 40.0;      // m
  double pathloss_exp = 2.0;
  double bandwidth = 5e6;         // Hz
  double noise_psd_dbm_hz = -174.0;
  double bs_power_dbm = 41.0;
  double circuit_power_dbm = 30.0;
  double weight_strong = 0.9;
  double weight_weak = 1.1;
  double qos_bps_hz = 2.0;        // per-user threshold, bit/s/Hz of B_c
  std::uint64_t seed = 1;

  void validate() const;
  double channel_bandwidth() const { return bandwidth / num_channels; }
  // sigma^2 = B N0 / M, in W.
  double noise_power() const;
  double bs_power() const;
  double circuit_power() const;
  double qos_rate() const { return qos_bps_hz * channel_bandwidth(); }
  SystemParams system() const;
};

class CnrMatrix {
 public:
  CnrMatrix() = default;
  CnrMatrix(int users, int channels)
      : users_(users), channels_(channels),
        data_(static_cast<std::size_t>(users) * channels, 0.0) {}

  int users() const { return users_; }
  int channels() const { return channels_; }
  double operator()(int n, int m) const { return data_[index(n, m)]; }
  double& operator()(int n, int m) { return data_[index(n, m)]; }
  bool operator==(const CnrMatrix&) const = default;

 private:
  std::size_t index(int n, int m) const {
    return static_cast<std::size_t>(n) * channels_ + m;
  }
  int users_ = 0;
  int channels_ = 0;
  std::vector<double> data_;
};

struct Scenario {
  CnrMatrix cnr;                  // Gamma[n][m] in 1/W
  std::vector<double> distances;  // per user, m; empty for imported matrices
  ScenarioParams params;

  int num_users() const { return cnr.users(); }
  int num_channels() const { return cnr.channels(); }
};

// Users uniform by area in the annulus [min_bs_dist, cell_radius] with
// pairwise separation >= min_user_sep; g ~ CN(0,1) per (user, channel);
// Gamma = |g|^2 d^{-2 alpha} / sigma^2. Pure function of params.
Scenario generate(const ScenarioParams& params);

// Wraps explicit CNRs; throws ShapeError unless rows = 2 * cols and
// DomainError on a non-positive entry.
Scenario from_matrix(const std::vector<std::vector<double>>& rows,
                     const ScenarioParams& params);

// Matrix file: '#'-comment lines echoing params as "key = value", then a
// header row "N,M", then one row per user of M comma-separated CNRs.
void write_matrix_csv(std::ostream& os, const Scenario& scenario);
Scenario read_matrix_csv(std::istream& is, const ScenarioParams& defaults);

// The two users u, v on channel m ordered by their CNR on m (lower index
// wins ties), with the scenario's role weights and QoS thresholds.
ChannelPair make_channel_pair(const Scenario& s, int channel, int u, int v,
                              UserPair* roles = nullptr);

using Pairing = std::vector<std::array<int, 2>>;

SolveInput make_solve_input(const Scenario& s, const Pairing& pairing);

}  // namespace noma
