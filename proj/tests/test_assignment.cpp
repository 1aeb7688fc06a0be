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
#include <vector>

#include "doctest.h"
#include "noma/assignment.hpp"
#include "noma/errors.hpp"
#include "noma/oracle.hpp"

using noma::Criterion;
using noma::UserPair;

namespace {

noma::Scenario matrix(const std::vector<std::vector<double>>& rows,
                      double qos_bps_hz = 2.0) {
  noma::ScenarioParams p;
  p.qos_bps_hz = qos_bps_hz;
  p.bandwidth = static_cast<double>(rows[0].size());  // unit channel bandwidth
  p.bs_power_dbm = noma::watts_to_dbm(2.0 * rows[0].size());
  return noma::from_matrix(rows, p);
}

bool same_users(const UserPair& a, int u, int v) {
  return (a.strong == u && a.weak == v) || (a.strong == v && a.weak == u);
}

}  // namespace

TEST_CASE("da_match: a single channel takes both users") {
  const auto s = matrix({{3.0}, {1.0}});
  const auto r = noma::da_match(s, Criterion::kMaxMinFairness, {1.0});
  REQUIRE(r.assignment.size() == 1);
  CHECK(r.assignment[0] == UserPair{0, 1});
  CHECK(r.proposal_count == 2);
}

TEST_CASE("da_match: no channel is over-subscribed") {
  const auto s = matrix({{10, 1}, {9, 2}, {1, 8}, {2, 7}});
  const auto r = noma::da_match(s, Criterion::kMaxMinFairness, {1.0, 1.0});
  CHECK(r.assignment[0] == UserPair{0, 1});
  CHECK(r.assignment[1] == UserPair{2, 3});
  CHECK(r.rejections == 0);
  CHECK(r.proposal_count == 4);
  CHECK_FALSE(r.fallback_used);
}

TEST_CASE("da_match: a rejected user moves to its next channel") {
  const auto s = matrix({{10, 1}, {9, 2}, {8, 3}, {2, 7}});
  // The incumbent pair ranks above both pairs containing the newcomer.
  const auto value = [&](int u, int v) {
    return noma::oracle::search_split(
               Criterion::kMaxMinFairness,
               noma::make_channel_pair(s, 0, u, v), 1.0, 1.0)
        .value;
  };
  CHECK(value(0, 1) > value(0, 2));
  CHECK(value(0, 1) > value(1, 2));

  const auto r = noma::da_match(s, Criterion::kMaxMinFairness, {1.0, 1.0});
  CHECK(same_users(r.assignment[0], 0, 1));
  CHECK(same_users(r.assignment[1], 2, 3));
  CHECK(r.rejections == 1);
  CHECK(r.proposal_count == 5);
  CHECK(r.swaps.empty());
}

TEST_CASE("da_match rejects N != 2M") {
  noma::Scenario s;
  s.cnr = noma::CnrMatrix(3, 2);
  CHECK_THROWS_AS(noma::da_match(s, Criterion::kMaxMinFairness, {1.0, 1.0}),
                  noma::ShapeError);
  CHECK_THROWS_AS(noma::cup_assign(s.cnr), noma::ShapeError);
}

TEST_CASE("da_match: valid matchings and bounded proposals on random "
          "instances") {
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    noma::ScenarioParams p;
    p.num_channels = 1 + static_cast<int>(seed % 10);
    p.num_users = 2 * p.num_channels;
    p.seed = seed;
    const auto s = noma::generate(p);
    const std::vector<double> q(p.num_channels,
                                p.bs_power() / p.num_channels);
    for (Criterion c : {Criterion::kMaxMinFairness,
                        Criterion::kWeightedSumRate, Criterion::kQosSumRate}) {
      const auto r = noma::da_match(s, c, q);
      CHECK(noma::is_two_to_one(r.assignment, s.cnr));
      CHECK(r.proposal_count <= p.num_users * p.num_channels);
      for (const auto& swap : r.swaps) {
        CHECK(swap.value_after > swap.value_before);
      }
    }
  }
}

TEST_CASE("joint_optimize: one iteration is one match and one solve") {
  const auto s = matrix({{10, 1}, {9, 2}, {8, 3}, {2, 7}});
  const double half = s.params.bs_power() / 2.0;
  const auto j = noma::joint_optimize(Criterion::kMaxMinFairness, s, 1);
  const auto m = noma::da_match(s, Criterion::kMaxMinFairness, {half, half});
  CHECK(j.match.assignment == m.assignment);
  const auto r = noma::solve(
      Criterion::kMaxMinFairness,
      noma::make_solve_input(s, noma::to_pairing(m.assignment)));
  CHECK(j.report.objective == doctest::Approx(r.objective).epsilon(1e-12));
  CHECK(j.history.size() == 1);
}

TEST_CASE("joint_optimize: assignment settles by the second iteration") {
  const auto s = matrix({{10, 1}, {9, 2}, {8, 3}, {2, 7}});
  const auto j = noma::joint_optimize(Criterion::kMaxMinFairness, s, 10);
  CHECK(j.repeated);
  CHECK(j.history.size() <= 2);
  const auto& rates = j.report.allocation.rates;
  const auto [lo, hi] = std::minmax_element(rates.begin(), rates.end());
  CHECK(*hi - *lo <= 1e-6 * *hi);
}

TEST_CASE("cup_assign pairs opposite ranks of the mean CNR") {
  // Mean CNRs: user 0 -> 3, user 1 -> 10, user 2 -> 2, user 3 -> 9.
  const noma::Scenario s = matrix({{2, 4}, {11, 9}, {1, 3}, {8, 10}});
  const auto r = noma::cup_assign(s.cnr);
  CHECK(same_users(r.assignment[0], 1, 2));
  CHECK(same_users(r.assignment[1], 3, 0));
  CHECK(noma::is_two_to_one(r.assignment, s.cnr));

  const auto single = noma::cup_assign(matrix({{1.0}, {2.0}}).cnr);
  CHECK(single.assignment[0] == UserPair{1, 0});
}

TEST_CASE("exhaustive_assign: trivial and small instances") {
  const auto one = noma::exhaustive_assign(Criterion::kMaxMinFairness,
                                           matrix({{3.0}, {1.0}}));
  CHECK(one.evaluated == 1);
  CHECK(one.assignment[0] == UserPair{0, 1});

  const auto s = matrix({{10, 1}, {9, 2}, {8, 3}, {2, 7}}, 1.0);
  for (Criterion c : {Criterion::kMaxMinFairness,
                      Criterion::kWeightedSumRate, Criterion::kQosSumRate}) {
    const auto ex = noma::exhaustive_assign(c, s);
    CHECK(ex.evaluated == 6);
    // Direct enumeration of the six labeled assignments.
    const std::vector<noma::Pairing> all{
        {{0, 1}, {2, 3}}, {{2, 3}, {0, 1}}, {{0, 2}, {1, 3}},
        {{1, 3}, {0, 2}}, {{0, 3}, {1, 2}}, {{1, 2}, {0, 3}}};
    double best = -1e300;
    for (const auto& a : all) {
      try {
        best = std::max(best,
                        noma::solve(c, noma::make_solve_input(s, a)).objective);
      } catch (const noma::InfeasibleError&) {
      }
    }
    CHECK(ex.report.objective == doctest::Approx(best).epsilon(1e-12));
  }
}

TEST_CASE("exhaustive_assign dominates matching and CUP") {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    noma::ScenarioParams p;
    p.num_users = 6;
    p.num_channels = 3;
    p.seed = seed;
    const auto s = noma::generate(p);
    for (Criterion c : {Criterion::kMaxMinFairness, Criterion::kQosSumRate,
                        Criterion::kQosEnergyEff}) {
      const auto ex = noma::exhaustive_assign(c, s);
      CHECK(ex.evaluated == 90);
      const auto j = noma::joint_optimize(c, s);
      CHECK(ex.report.objective >= j.report.objective * (1.0 - 1e-12));
      const auto cup = noma::solve(
          c, noma::make_solve_input(
                 s, noma::to_pairing(noma::cup_assign(s.cnr).assignment)));
      CHECK(ex.report.objective >= cup.objective * (1.0 - 1e-12));
    }
  }
}

TEST_CASE("exhaustive_assign refuses large instances") {
  noma::ScenarioParams p;
  p.num_users = 12;
  p.num_channels = 6;
  CHECK_THROWS_AS(
      noma::exhaustive_assign(Criterion::kMaxMinFairness, noma::generate(p)),
      noma::DomainError);
}

TEST_CASE("ofdma_rates: waterfilling and equal-rate modes") {
  auto r = noma::ofdma_rates(noma::OfdmaMode::kSumRate, {1.0, 0.5}, 1.0, 5.0);
  CHECK(r.powers[0] == doctest::Approx(3.0).epsilon(1e-9));
  CHECK(r.powers[1] == doctest::Approx(2.0).epsilon(1e-9));

  r = noma::ofdma_rates(noma::OfdmaMode::kSumRate, {2.0, 2.0, 2.0}, 1.0, 6.0);
  for (double p : r.powers) CHECK(p == doctest::Approx(2.0));

  r = noma::ofdma_rates(noma::OfdmaMode::kMaxMin, {0.3, 7.0, 2.0}, 1e6, 4.0);
  for (double rate : r.rates) {
    CHECK(rate == doctest::Approx(r.rates[0]).epsilon(1e-9));
  }
  CHECK(r.transmit_power == doctest::Approx(4.0));

  r = noma::ofdma_rates(noma::OfdmaMode::kEnergyEfficiency, {0.3, 7.0}, 1.0,
                        100.0, 1.0);
  CHECK(r.transmit_power <= 100.0);
  const auto full =
      noma::ofdma_rates(noma::OfdmaMode::kSumRate, {0.3, 7.0}, 1.0, 100.0, 1.0);
  CHECK(r.energy_efficiency >= full.energy_efficiency);
}

TEST_CASE("ofdma_baseline gives every user its own half channel") {
  noma::ScenarioParams p;
  p.seed = 5;
  const auto s = noma::generate(p);
  const auto r = noma::ofdma_baseline(noma::OfdmaMode::kSumRate, s);
  std::vector<int> load(s.num_channels(), 0);
  for (int ch : r.channel) ++load[ch];
  for (int l : load) CHECK(l == 2);
  CHECK(r.transmit_power == doctest::Approx(s.params.bs_power()));
}
