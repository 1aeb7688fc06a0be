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

#include "noma/cli.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <map>
#include <ostream>
#include <set>
#include <sstream>

#include "noma/assignment.hpp"
#include "noma/perchannel.hpp"

namespace noma::cli {
namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split_list(const std::string& value) {
  std::vector<std::string> out;
  std::stringstream ss(value);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

double to_double(const std::string& key, const std::string& v) {
  std::size_t used = 0;
  double x = 0.0;
  try {
    x = std::stod(v, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != v.size() || !std::isfinite(x)) {
    throw ConfigError("key '" + key + "': '" + v + "' is not a number");
  }
  return x;
}

long long to_integer(const std::string& key, const std::string& v) {
  std::size_t used = 0;
  long long x = 0;
  try {
    x = std::stoll(v, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != v.size()) {
    throw ConfigError("key '" + key + "': '" + v + "' is not an integer");
  }
  return x;
}

bool to_bool(const std::string& key, const std::string& v) {
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  throw ConfigError("key '" + key + "': '" + v + "' is not a boolean");
}

int positive_int(const std::string& key, const std::string& v) {
  const long long x = to_integer(key, v);
  if (x < 1 || x > 1000000) {
    throw ConfigError("key '" + key + "' must be a positive integer");
  }
  return static_cast<int>(x);
}

std::string fmt(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.9g", x);
  return buf;
}

SolveReport run_noma(Criterion c, Method m, const Scenario& s,
                     const Config& cfg, int* iterations) {
  switch (m) {
    case Method::kMatching: {
      JointResult j = joint_optimize(c, s, cfg.joint_iters, cfg.solve);
      *iterations = static_cast<int>(j.history.size());
      return std::move(j.report);
    }
    case Method::kCup: {
      const MatchResult cup = cup_assign(s.cnr);
      *iterations = 1;
      return solve(c, make_solve_input(s, to_pairing(cup.assignment)),
                   cfg.solve);
    }
    case Method::kExhaustive: {
      ExhaustiveResult ex = exhaustive_assign(c, s, cfg.solve);
      *iterations = 1;
      return std::move(ex.report);
    }
    case Method::kOfdma:
      break;
  }
  throw ConfigError("method ofdma has no NOMA allocation to report");
}

Scenario load_scenario(const Config& cfg, const SolveArgs& args) {
  if (!args.matrix_path) return generate(cfg.scenario);
  std::ifstream in(*args.matrix_path);
  if (!in) throw ConfigError("cannot open matrix file " + *args.matrix_path);
  Scenario s = read_matrix_csv(in, cfg.scenario);
  // System parameters come from the configuration; the file supplies CNRs.
  ScenarioParams p = cfg.scenario;
  p.num_users = s.num_users();
  p.num_channels = s.num_channels();
  s.params = p;
  return s;
}

void print_report(std::ostream& out, Criterion c, Method m,
                  const Scenario& s, const SolveReport& r, int iterations) {
  const Allocation& a = r.allocation;
  out << std::setprecision(9);
  out << "criterion        " << to_string(c) << "\n"
      << "method           " << to_string(m) << "\n"
      << "users            " << s.num_users() << "\n"
      << "channels         " << s.num_channels() << "\n"
      << "total_power_w    " << s.params.bs_power() << "\n"
      << "objective        " << r.objective << "\n"
      << "iterations       " << iterations << "\n"
      << "min_rate_bps     " << a.min_rate << "\n"
      << "sum_rate_bps     " << a.sum_rate << "\n"
      << "transmit_power_w " << a.transmit_power << "\n"
      << "ee_bps_per_w     " << a.energy_efficiency << "\n"
      << "stable_all       " << (a.stable_all ? "yes" : "no") << "\n\n";
  out << "channel,strong,weak,budget_w,p_strong_w,p_weak_w,verdict\n";
  for (std::size_t k = 0; k < a.assignment.size(); ++k) {
    out << k << "," << a.assignment[k].strong << "," << a.assignment[k].weak
        << "," << r.budgets.q[k] << "," << a.splits[k].p_strong << ","
        << a.splits[k].p_weak << "," << to_string(r.verdicts[k]) << "\n";
  }
  out << "\n";
}

void write_user_csv(std::ostream& os, const SolveReport& r) {
  const Allocation& a = r.allocation;
  os << "user,channel,role,power_w,rate_bps\n";
  std::vector<std::string> rows(a.rates.size());
  for (std::size_t k = 0; k < a.assignment.size(); ++k) {
    const UserPair& u = a.assignment[k];
    rows[u.strong] = std::to_string(k) + ",strong," +
                     fmt(a.splits[k].p_strong) + "," + fmt(a.rates[u.strong]);
    rows[u.weak] = std::to_string(k) + ",weak," + fmt(a.splits[k].p_weak) +
                   "," + fmt(a.rates[u.weak]);
  }
  for (std::size_t n = 0; n < rows.size(); ++n) {
    os << n << "," << rows[n] << "\n";
  }
}

}  // namespace

std::string to_string(Method m) {
  switch (m) {
    case Method::kMatching: return "matching";
    case Method::kCup: return "cup";
    case Method::kExhaustive: return "exhaustive";
    case Method::kOfdma: return "ofdma";
  }
  return "?";
}

Method parse_method(const std::string& name) {
  if (name == "matching") return Method::kMatching;
  if (name == "cup") return Method::kCup;
  if (name == "exhaustive") return Method::kExhaustive;
  if (name == "ofdma") return Method::kOfdma;
  throw ConfigError("unknown method '" + name +
                    "' (expected matching, cup, exhaustive or ofdma)");
}

Config parse_config(std::istream& is) {
  Config cfg;
  std::set<std::string> seen;
  std::optional<int> users;
  std::optional<int> channels;
  std::string line;
  int line_no = 0;
  while (std::getline(is, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("line " + std::to_string(line_no) +
                        ": expected 'key = value'");
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (!seen.insert(key).second) {
      throw ConfigError("line " + std::to_string(line_no) + ": key '" + key +
                        "' given twice");
    }
    if (value.empty()) {
      throw ConfigError("line " + std::to_string(line_no) + ": key '" + key +
                        "' has no value");
    }
    ScenarioParams& p = cfg.scenario;
    if (key == "criterion") {
      cfg.criteria.clear();
      for (const std::string& v : split_list(value)) {
        try {
          cfg.criteria.push_back(parse_criterion(v));
        } catch (const DomainError& e) {
          throw ConfigError(e.what());
        }
      }
    } else if (key == "method") {
      cfg.methods.clear();
      for (const std::string& v : split_list(value)) {
        cfg.methods.push_back(parse_method(v));
      }
    } else if (key == "users") {
      users = positive_int(key, value);
    } else if (key == "channels") {
      channels = positive_int(key, value);
    } else if (key == "power_dbm") {
      p.bs_power_dbm = to_double(key, value);
    } else if (key == "circuit_power_dbm") {
      p.circuit_power_dbm = to_double(key, value);
    } else if (key == "bandwidth_hz") {
      p.bandwidth = to_double(key, value);
    } else if (key == "noise_dbm_hz") {
      p.noise_psd_dbm_hz = to_double(key, value);
    } else if (key == "weight_strong") {
      p.weight_strong = to_double(key, value);
    } else if (key == "weight_weak") {
      p.weight_weak = to_double(key, value);
    } else if (key == "qos_bps_hz") {
      p.qos_bps_hz = to_double(key, value);
    } else if (key == "seed") {
      const long long s = to_integer(key, value);
      if (s < 0) throw ConfigError("seed must be non-negative");
      p.seed = static_cast<std::uint64_t>(s);
    } else if (key == "trials") {
      cfg.trials = positive_int(key, value);
    } else if (key == "sweep_power_dbm") {
      cfg.sweep_power_dbm.clear();
      for (const std::string& v : split_list(value)) {
        cfg.sweep_power_dbm.push_back(to_double(key, v));
      }
    } else if (key == "sweep_users") {
      cfg.sweep_users.clear();
      for (const std::string& v : split_list(value)) {
        const int n = positive_int(key, v);
        if (n % 2 != 0) throw ConfigError("sweep_users entries must be even");
        cfg.sweep_users.push_back(n);
      }
    } else if (key == "joint_iters") {
      cfg.joint_iters = positive_int(key, value);
    } else if (key == "theta_margin") {
      cfg.solve.theta_margin = to_double(key, value);
      if (cfg.solve.theta_margin < 0.0) {
        throw ConfigError("theta_margin must be >= 0");
      }
    } else if (key == "ee2_literal_weight") {
      cfg.solve.ee2_literal_weight = to_bool(key, value);
    } else {
      throw ConfigError("line " + std::to_string(line_no) + ": unknown key '" +
                        key + "'");
    }
  }
  if (cfg.criteria.empty()) throw ConfigError("criterion list is empty");
  if (cfg.methods.empty()) throw ConfigError("method list is empty");

  ScenarioParams& p = cfg.scenario;
  if (users && channels && *users != 2 * *channels) {
    throw ConfigError("users must equal 2 * channels");
  }
  if (users) {
    if (*users % 2 != 0) throw ConfigError("users must be even");
    p.num_users = *users;
    p.num_channels = *users / 2;
  } else if (channels) {
    p.num_channels = *channels;
    p.num_users = 2 * *channels;
  }
  try {
    p.validate();
  } catch (const DomainError& e) {
    throw ConfigError(e.what());
  }
  return cfg;
}

Config load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path);
  return parse_config(in);
}

std::uint64_t trial_seed(std::uint64_t base, int trial, int num_users) {
  return derive_seed(base, 0x100u + static_cast<std::uint64_t>(num_users),
                     static_cast<std::uint64_t>(trial));
}

MethodOutcome evaluate_method(Criterion c, Method m, const Scenario& s,
                              const Config& cfg) {
  MethodOutcome o;
  if (m == Method::kOfdma) {
    const OfdmaResult r = ofdma_baseline(ofdma_mode_for(c), s);
    o.min_rate = r.min_rate;
    o.sum_rate = r.sum_rate;
    o.energy_efficiency = r.energy_efficiency;
    o.objective = c == Criterion::kMaxMinFairness ? r.min_rate
                  : is_energy_efficiency(c)      ? r.energy_efficiency
                                                 : r.sum_rate;
    // Without superposition there is no decoding order to break.
    o.stable = true;
    o.feasible = !uses_qos(c) || r.min_rate >= s.params.qos_rate();
    if (!o.feasible) o.failure = "a subband rate is below the QoS threshold";
    o.iterations = 1;
    return o;
  }
  try {
    const SolveReport r = run_noma(c, m, s, cfg, &o.iterations);
    o.feasible = true;
    o.stable = r.allocation.stable_all;
    o.min_rate = r.allocation.min_rate;
    o.sum_rate = r.allocation.sum_rate;
    o.energy_efficiency = r.allocation.energy_efficiency;
    o.objective = r.objective;
  } catch (const InfeasibleError& e) {
    o.failure = e.what();
    o.iterations = 0;
  } catch (const ConvergenceError& e) {
    o.failure = e.what();
    o.iterations = e.last_state().iteration;
  }
  return o;
}

int run_solve(const Config& cfg, const SolveArgs& args, std::ostream& out,
              std::ostream& err) {
  if (cfg.criteria.size() != 1 || cfg.methods.size() != 1) {
    err << "error: solve takes exactly one criterion and one method\n";
    return kConfigFailure;
  }
  const Criterion c = cfg.criteria.front();
  const Method m = cfg.methods.front();
  try {
    const Scenario s = load_scenario(cfg, args);
    if (args.save_matrix_path) {
      std::ofstream f(*args.save_matrix_path);
      if (!f) throw ConfigError("cannot write " + *args.save_matrix_path);
      write_matrix_csv(f, s);
    }
    int iterations = 0;
    const SolveReport r = run_noma(c, m, s, cfg, &iterations);
    print_report(out, c, m, s, r, iterations);
    write_user_csv(out, r);
    if (args.csv_path) {
      std::ofstream f(*args.csv_path);
      if (!f) throw ConfigError("cannot write " + *args.csv_path);
      write_user_csv(f, r);
    }
    return kSuccess;
  } catch (const InfeasibleError& e) {
    err << "infeasible: " << e.what() << "\n";
    if (!e.channels().empty()) {
      err << "offending channels:";
      for (int k : e.channels()) err << " " << k;
      err << "\n";
    }
    if (e.required() > 0.0) {
      err << "required power: " << fmt(e.required()) << " W\n";
    }
    return kInfeasible;
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << "\n";
    return kConfigFailure;
  } catch (const DomainError& e) {
    err << "input error: " << e.what() << "\n";
    return kConfigFailure;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kRuntimeFailure;
  }
}

void write_montecarlo(const Config& cfg, std::ostream& csv, bool timing) {
  std::vector<int> users = cfg.sweep_users;
  if (users.empty()) users.push_back(cfg.scenario.num_users);
  std::vector<double> powers = cfg.sweep_power_dbm;
  if (powers.empty()) powers.push_back(cfg.scenario.bs_power_dbm);
  for (Method m : cfg.methods) {
    for (int n : users) {
      if (m == Method::kExhaustive && n > kMaxExhaustiveUsers) {
        throw ConfigError("exhaustive search is limited to N <= " +
                          std::to_string(kMaxExhaustiveUsers));
      }
    }
  }

  csv << kMonteCarloHeader << "\n";
  for (int trial = 0; trial < cfg.trials; ++trial) {
    for (int n : users) {
      ScenarioParams p = cfg.scenario;
      p.num_users = n;
      p.num_channels = n / 2;
      p.seed = trial_seed(cfg.scenario.seed, trial, n);
      const Scenario base = generate(p);
      for (double power_dbm : powers) {
        Scenario s = base;
        s.params.bs_power_dbm = power_dbm;
        for (Criterion c : cfg.criteria) {
          for (Method m : cfg.methods) {
            const auto start = std::chrono::steady_clock::now();
            const MethodOutcome o = evaluate_method(c, m, s, cfg);
            const double ms =
                timing ? std::chrono::duration<double, std::milli>(
                             std::chrono::steady_clock::now() - start)
                             .count()
                       : 0.0;
            const double nan = std::nan("");
            csv << p.seed << "," << trial << "," << to_string(c) << ","
                << to_string(m) << "," << fmt(power_dbm) << "," << n << ","
                << n / 2 << "," << fmt(o.feasible ? o.min_rate : nan) << ","
                << fmt(o.feasible ? o.sum_rate : nan) << ","
                << fmt(o.feasible ? o.energy_efficiency : nan) << ","
                << (o.feasible ? 1 : 0) << "," << (o.stable ? 1 : 0) << ","
                << o.iterations << "," << fmt(ms) << "\n";
          }
        }
      }
    }
  }
}

int run_montecarlo(const Config& cfg, const std::string& out_path,
                   bool timing, std::ostream& out, std::ostream& err) {
  try {
    if (out_path == "-") {
      write_montecarlo(cfg, out, timing);
      return kSuccess;
    }
    std::ofstream f(out_path);
    if (!f) throw ConfigError("cannot write " + out_path);
    write_montecarlo(cfg, f, timing);
    f.close();
    if (!f) {
      err << "error: failed writing " << out_path << "\n";
      return kRuntimeFailure;
    }
    return kSuccess;
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << "\n";
    return kConfigFailure;
  } catch (const DomainError& e) {
    err << "input error: " << e.what() << "\n";
    return kConfigFailure;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kRuntimeFailure;
  }
}

}  // namespace noma::cli
