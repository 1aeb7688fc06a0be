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

#include <cmath>

#include "doctest.h"
#include "noma/errors.hpp"
#include "noma/model.hpp"
#include "reference.hpp"

using noma::PowerSplit;
using noma::rate_pair;

TEST_CASE("rate_pair: zero power gives zero rate") {
  const auto r = rate_pair(ref::pair(1, 1), PowerSplit::of(0, 0), 1.0);
  CHECK(r.strong == 0.0);
  CHECK(r.weak == 0.0);
}

TEST_CASE("rate_pair: known operating points") {
  auto r = rate_pair(ref::pair(4, 1), PowerSplit::of(1.75, 8.25), 1.0);
  CHECK(r.strong == doctest::Approx(3.0).epsilon(1e-12));
  CHECK(r.weak == doctest::Approx(2.0).epsilon(1e-12));

  r = rate_pair(ref::pair(1, 1), PowerSplit::of(1, 2), 1.0);
  CHECK(r.strong == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(r.weak == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("rate_pair scales linearly with bandwidth") {
  const auto p = ref::pair(7.5, 0.3);
  const auto a = rate_pair(p, PowerSplit::of(0.2, 3.1), 1.0);
  const auto b = rate_pair(p, PowerSplit::of(0.2, 3.1), 1e6);
  CHECK(b.strong == doctest::Approx(1e6 * a.strong));
  CHECK(b.weak == doctest::Approx(1e6 * a.weak));
  CHECK(a.strong == doctest::Approx(ref::rate_strong(7.5, 0.2, 1.0)));
  CHECK(a.weak == doctest::Approx(ref::rate_weak(0.3, 0.2, 3.1, 1.0)));
}

TEST_CASE("rate_pair monotonicity in the strong-user share") {
  const auto p = ref::pair(6.0, 0.7);
  const double q = 4.0;
  double last_strong = -1.0;
  double last_weak = 1e300;
  for (int i = 0; i <= 40; ++i) {
    const double ps = q * i / 40.0;
    const auto r = rate_pair(p, PowerSplit::of(ps, q - ps), 1.0);
    CHECK(r.strong >= 0.0);
    CHECK(r.weak >= 0.0);
    CHECK(r.strong > last_strong);
    CHECK(r.weak < last_weak);
    last_strong = r.strong;
    last_weak = r.weak;
  }
}

TEST_CASE("PowerSplit stability flag is strict") {
  CHECK(PowerSplit::of(1, 2).stable);
  CHECK_FALSE(PowerSplit::of(2, 2).stable);
  CHECK(PowerSplit::of(0, 2).stable);
}

TEST_CASE("ChannelPair validation") {
  CHECK_NOTHROW(ref::pair(2, 1).validate());
  CHECK_NOTHROW(ref::pair(1, 1).validate());
  CHECK_THROWS_AS(ref::pair(1, 2).validate(), noma::DomainError);
  CHECK_THROWS_AS(ref::pair(0, 0).validate(), noma::DomainError);
  CHECK_THROWS_AS(ref::pair(2, 1, 0.0, 1.0).validate(), noma::DomainError);
  CHECK_THROWS_AS(ref::pair(2, 1, 1.0, 1.0, -1.0).validate(),
                  noma::DomainError);
}

TEST_CASE("dBm conversions") {
  CHECK(noma::dbm_to_watts(30) == doctest::Approx(1.0));
  CHECK(noma::dbm_to_watts(0) == doctest::Approx(0.001));
  CHECK(noma::dbm_to_watts(41) == doctest::Approx(12.589).epsilon(1e-4));
  CHECK(noma::watts_to_dbm(1.0) == doctest::Approx(30.0));
  CHECK(noma::watts_to_dbm(noma::dbm_to_watts(17.3)) == doctest::Approx(17.3));
  CHECK_THROWS_AS(noma::watts_to_dbm(0.0), noma::DomainError);
  CHECK_THROWS_AS(noma::watts_to_dbm(-2.0), noma::DomainError);
}

TEST_CASE("QoS threshold in SNR form") {
  CHECK(noma::qos_snr(2.0, 1.0) == doctest::Approx(4.0));
  CHECK(noma::qos_snr(2e6, 1e6) == doctest::Approx(4.0));
  CHECK(noma::qos_snr(0.0, 1.0) == doctest::Approx(1.0));
}
