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

#include "noma/model.hpp"

#include <cmath>
#include <numeric>
#include <string>

#include "noma/errors.hpp"

namespace noma {

void ChannelPair::validate() const {
  if (!(gamma_weak > 0.0) || !std::isfinite(gamma_strong)) {
    throw DomainError("channel CNRs must be positive and finite");
  }
  if (gamma_strong < gamma_weak) {
    throw DomainError("channel pair must be ordered gamma_strong >= gamma_weak");
  }
  if (!(weight_strong > 0.0) || !(weight_weak > 0.0)) {
    throw DomainError("user weights must be positive");
  }
  if (qos_strong < 0.0 || qos_weak < 0.0) {
    throw DomainError("QoS thresholds must be non-negative");
  }
}

double Budgets::sum() const { return std::accumulate(q.begin(), q.end(), 0.0); }

PairRates rate_pair(const ChannelPair& pair, const PowerSplit& split,
                    double bc) {
  const double strong = bc * std::log2(1.0 + split.p_strong * pair.gamma_strong);
  const double sinr_weak = split.p_weak * pair.gamma_weak /
                           (split.p_strong * pair.gamma_weak + 1.0);
  return {strong, bc * std::log2(1.0 + sinr_weak)};
}

double dbm_to_watts(double dbm) {
  if (!std::isfinite(dbm)) throw DomainError("dBm value must be finite");
  return std::pow(10.0, (dbm - 30.0) / 10.0);
}

double watts_to_dbm(double watts) {
  if (!(watts > 0.0) || !std::isfinite(watts)) {
    throw DomainError("watts_to_dbm needs a positive power, got " +
                      std::to_string(watts));
  }
  return 10.0 * std::log10(watts) + 30.0;
}

double qos_snr(double rate_bps, double bc) { return std::exp2(rate_bps / bc); }

}  // namespace noma
