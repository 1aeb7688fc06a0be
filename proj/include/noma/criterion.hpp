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

#include <string>
#include <string_view>

namespace noma {

enum class Criterion {
  kMaxMinFairness,      // mmf
  kWeightedSumRate,     // sr1
  kQosSumRate,          // sr2
  kWeightedEnergyEff,   // ee1
  kQosEnergyEff,        // ee2
};

std::string_view to_string(Criterion c);
// Accepts the short names mmf, sr1, sr2, ee1, ee2. Throws DomainError.
Criterion parse_criterion(std::string_view name);

inline bool uses_qos(Criterion c) {
  return c == Criterion::kQosSumRate || c == Criterion::kQosEnergyEff;
}
inline bool is_energy_efficiency(Criterion c) {
  return c == Criterion::kWeightedEnergyEff || c == Criterion::kQosEnergyEff;
}

}  // namespace noma
