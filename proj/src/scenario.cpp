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

#include "noma/scenario.hpp"

#include <cmath>
#include <iomanip>
#include <istream>
#include <numbers>
#include <ostream>
#include <sstream>
#include <string>

#include "noma/errors.hpp"

namespace noma {
namespace {

constexpr int kMaxPlacementAttempts = 100000;

enum Stream : std::uint64_t { kPlacement = 1, kFading = 2 };

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split_commas(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) out.push_back(trim(cell));
  return out;
}

double parse_double(const std::string& s, int line_no) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != s.size() || s.empty()) {
    throw DomainError("line " + std::to_string(line_no) + ": '" + s +
                      "' is not a number");
  }
  return v;
}

void apply_param(ScenarioParams& p, const std::string& key,
                 const std::string& value, int line_no) {
  const double v = parse_double(value, line_no);
  if (key == "bandwidth_hz") p.bandwidth = v;
  else if (key == "noise_dbm_hz") p.noise_psd_dbm_hz = v;
  else if (key == "power_dbm") p.bs_power_dbm = v;
  else if (key == "circuit_power_dbm") p.circuit_power_dbm = v;
  else if (key == "weight_strong") p.weight_strong = v;
  else if (key == "weight_weak") p.weight_weak = v;
  else if (key == "qos_bps_hz") p.qos_bps_hz = v;
  else if (key == "seed") p.seed = static_cast<std::uint64_t>(v);
  // Other echoed keys are informational.
}

}  // namespace

double Rng::normal() {
  double u1 = uniform();
  while (u1 <= 0.0) u1 = uniform();
  const double u2 = uniform();
  return std::sqrt(-2.0 * std::log(u1)) *
         std::cos(2.0 * std::numbers::pi * u2);
}

std::uint64_t derive_seed(std::uint64_t base, std::uint64_t stream,
                          std::uint64_t index) {
  return splitmix64(splitmix64(splitmix64(base) ^ stream) ^ index);
}

void ScenarioParams::validate() const {
  if (num_channels < 1 || num_users != 2 * num_channels) {
    throw ShapeError("scenario needs num_users = 2 * num_channels >= 2");
  }
  if (!(cell_radius > min_bs_dist && min_bs_dist > 0.0)) {
    throw DomainError("need cell_radius > min_bs_dist > 0");
  }
  if (!(min_user_sep >= 0.0) || !(pathloss_exp > 0.0) || !(bandwidth > 0.0)) {
    throw DomainError("separation, path-loss exponent and bandwidth invalid");
  }
  if (!(weight_strong > 0.0) || !(weight_weak > 0.0) || !(qos_bps_hz >= 0.0)) {
    throw DomainError("weights must be positive and QoS non-negative");
  }
}

double ScenarioParams::noise_power() const {
  return bandwidth * dbm_to_watts(noise_psd_dbm_hz) / num_channels;
}
double ScenarioParams::bs_power() const { return dbm_to_watts(bs_power_dbm); }
double ScenarioParams::circuit_power() const {
  return dbm_to_watts(circuit_power_dbm);
}

SystemParams ScenarioParams::system() const {
  SystemParams s;
  s.bandwidth_total = bandwidth;
  s.num_channels = num_channels;
  s.noise_psd = dbm_to_watts(noise_psd_dbm_hz);
  s.circuit_power = circuit_power();
  s.bs_power = bs_power();
  return s;
}

Scenario generate(const ScenarioParams& params) {
  params.validate();
  Scenario s;
  s.params = params;
  const int n_users = params.num_users;
  const int n_channels = params.num_channels;

  Rng placement(derive_seed(params.seed, kPlacement, 0));
  std::vector<double> xs;
  std::vector<double> ys;
  const double r0 = params.min_bs_dist * params.min_bs_dist;
  const double r1 = params.cell_radius * params.cell_radius;
  int attempts = 0;
  while (static_cast<int>(xs.size()) < n_users) {
    if (++attempts > kMaxPlacementAttempts) {
      throw DomainError("could not place " + std::to_string(n_users) +
                        " users with the requested separation in " +
                        std::to_string(kMaxPlacementAttempts) + " attempts");
    }
    const double radius = std::sqrt(r0 + placement.uniform() * (r1 - r0));
    const double angle = 2.0 * std::numbers::pi * placement.uniform();
    const double x = radius * std::cos(angle);
    const double y = radius * std::sin(angle);
    bool far_enough = true;
    for (std::size_t k = 0; k < xs.size() && far_enough; ++k) {
      far_enough = std::hypot(x - xs[k], y - ys[k]) >= params.min_user_sep;
    }
    if (!far_enough) continue;
    xs.push_back(x);
    ys.push_back(y);
    s.distances.push_back(radius);
  }

  const double noise = params.noise_power();
  s.cnr = CnrMatrix(n_users, n_channels);
  for (int n = 0; n < n_users; ++n) {
    Rng fading(derive_seed(params.seed, kFading, static_cast<std::uint64_t>(n)));
    // Amplitude decays as d^-alpha, so power as d^-2alpha.
    const double path = std::pow(s.distances[n], -2.0 * params.pathloss_exp);
    for (int m = 0; m < n_channels; ++m) {
      const double re = fading.normal();
      const double im = fading.normal();
      const double gain = 0.5 * (re * re + im * im);
      s.cnr(n, m) = gain * path / noise;
    }
  }
  return s;
}

Scenario from_matrix(const std::vector<std::vector<double>>& rows,
                     const ScenarioParams& params) {
  const int n_users = static_cast<int>(rows.size());
  const int n_channels = rows.empty() ? 0 : static_cast<int>(rows[0].size());
  if (n_channels < 1 || n_users != 2 * n_channels) {
    throw ShapeError("CNR matrix is " + std::to_string(n_users) + "x" +
                     std::to_string(n_channels) + ", need N = 2M rows");
  }
  Scenario s;
  s.params = params;
  s.params.num_users = n_users;
  s.params.num_channels = n_channels;
  s.params.validate();
  s.cnr = CnrMatrix(n_users, n_channels);
  for (int n = 0; n < n_users; ++n) {
    if (static_cast<int>(rows[n].size()) != n_channels) {
      throw ShapeError("CNR matrix row " + std::to_string(n) +
                       " has the wrong length");
    }
    for (int m = 0; m < n_channels; ++m) {
      const double v = rows[n][m];
      if (!(v > 0.0) || !std::isfinite(v)) {
        throw DomainError("CNR at user " + std::to_string(n) + ", channel " +
                          std::to_string(m) + " must be positive");
      }
      s.cnr(n, m) = v;
    }
  }
  return s;
}

void write_matrix_csv(std::ostream& os, const Scenario& s) {
  const ScenarioParams& p = s.params;
  os << "# noma scenario: rows are users, columns are channels, linear CNR "
        "in 1/W\n";
  os << std::setprecision(17);
  os << "# users = " << s.num_users() << "\n";
  os << "# channels = " << s.num_channels() << "\n";
  os << "# bandwidth_hz = " << p.bandwidth << "\n";
  os << "# noise_dbm_hz = " << p.noise_psd_dbm_hz << "\n";
  os << "# power_dbm = " << p.bs_power_dbm << "\n";
  os << "# circuit_power_dbm = " << p.circuit_power_dbm << "\n";
  os << "# weight_strong = " << p.weight_strong << "\n";
  os << "# weight_weak = " << p.weight_weak << "\n";
  os << "# qos_bps_hz = " << p.qos_bps_hz << "\n";
  os << "# seed = " << p.seed << "\n";
  os << s.num_users() << "," << s.num_channels() << "\n";
  for (int n = 0; n < s.num_users(); ++n) {
    for (int m = 0; m < s.num_channels(); ++m) {
      os << (m ? "," : "") << s.cnr(n, m);
    }
    os << "\n";
  }
}

Scenario read_matrix_csv(std::istream& is, const ScenarioParams& defaults) {
  ScenarioParams params = defaults;
  std::vector<std::vector<double>> rows;
  int expected_users = -1;
  int expected_channels = -1;
  std::string line;
  int line_no = 0;
  while (std::getline(is, line)) {
    ++line_no;
    const std::string t = trim(line);
    if (t.empty()) continue;
    if (t[0] == '#') {
      const auto eq = t.find('=');
      if (eq != std::string::npos) {
        apply_param(params, trim(t.substr(1, eq - 1)), trim(t.substr(eq + 1)),
                    line_no);
      }
      continue;
    }
    const std::vector<std::string> cells = split_commas(t);
    if (expected_users < 0) {
      if (cells.size() != 2) {
        throw ShapeError("line " + std::to_string(line_no) +
                         ": header row must be 'N,M'");
      }
      expected_users = static_cast<int>(parse_double(cells[0], line_no));
      expected_channels = static_cast<int>(parse_double(cells[1], line_no));
      continue;
    }
    std::vector<double> row;
    for (const std::string& c : cells) row.push_back(parse_double(c, line_no));
    if (static_cast<int>(row.size()) != expected_channels) {
      throw ShapeError("line " + std::to_string(line_no) + ": expected " +
                       std::to_string(expected_channels) + " columns");
    }
    rows.push_back(std::move(row));
  }
  if (expected_users < 0) throw ShapeError("matrix file has no header row");
  if (static_cast<int>(rows.size()) != expected_users) {
    throw ShapeError("matrix file declares " + std::to_string(expected_users) +
                     " users but has " + std::to_string(rows.size()) +
                     " rows");
  }
  return from_matrix(rows, params);
}

ChannelPair make_channel_pair(const Scenario& s, int channel, int u, int v,
                              UserPair* roles) {
  if (u > v) std::swap(u, v);
  const double gu = s.cnr(u, channel);
  const double gv = s.cnr(v, channel);
  const bool u_strong = gu >= gv;
  ChannelPair p;
  p.gamma_strong = u_strong ? gu : gv;
  p.gamma_weak = u_strong ? gv : gu;
  p.weight_strong = s.params.weight_strong;
  p.weight_weak = s.params.weight_weak;
  p.qos_strong = s.params.qos_rate();
  p.qos_weak = s.params.qos_rate();
  if (roles) *roles = u_strong ? UserPair{u, v} : UserPair{v, u};
  return p;
}

SolveInput make_solve_input(const Scenario& s, const Pairing& pairing) {
  if (static_cast<int>(pairing.size()) != s.num_channels()) {
    throw ShapeError("pairing must cover every channel");
  }
  SolveInput in;
  in.num_users = s.num_users();
  in.bc = s.params.channel_bandwidth();
  in.total_power = s.params.bs_power();
  in.circuit_power = s.params.circuit_power();
  for (int m = 0; m < s.num_channels(); ++m) {
    UserPair roles;
    in.pairs.push_back(make_channel_pair(s, m, pairing[m][0], pairing[m][1],
                                         &roles));
    in.users.push_back(roles);
  }
  return in;
}

}  // namespace noma
