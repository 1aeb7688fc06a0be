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

#include "noma/criterion.hpp"

#include "noma/errors.hpp"

namespace noma {

std::string_view to_string(Criterion c) {
  switch (c) {
    case Criterion::kMaxMinFairness: return "mmf";
    case Criterion::kWeightedSumRate: return "sr1";
    case Criterion::kQosSumRate: return "sr2";
    case Criterion::kWeightedEnergyEff: return "ee1";
    case Criterion::kQosEnergyEff: return "ee2";
  }
  return "?";
}

Criterion parse_criterion(std::string_view name) {
  if (name == "mmf") return Criterion::kMaxMinFairness;
  if (name == "sr1") return Criterion::kWeightedSumRate;
  if (name == "sr2") return Criterion::kQosSumRate;
  if (name == "ee1") return Criterion::kWeightedEnergyEff;
  if (name == "ee2") return Criterion::kQosEnergyEff;
  throw DomainError("unknown criterion '" + std::string(name) +
                    "' (expected mmf, sr1, sr2, ee1 or ee2)");
}

}  // namespace noma
