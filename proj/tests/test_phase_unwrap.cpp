#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "ffcr/phase_unwrap.hpp"

using namespace ffcr;

namespace {
TimingEstimate tau(int code) { return TimingEstimate{static_cast<std::int8_t>(code)}; }
}  // namespace

TEST_CASE("edge detector wraps a forward phase wrap") {
  // tau_prev = 0.90625 (58), tau_now = -0.90625 (-58): -1.8125 + 2 = +0.1875
  CHECK(unwrap_step(tau(-58), tau(58)) == 12);
}

TEST_CASE("edge detector wraps a backward phase wrap") {
  CHECK(unwrap_step(tau(58), tau(-58)) == -12);
}

TEST_CASE("small steps pass through unchanged") {
  // 0.5 -> 0.59375
  CHECK(unwrap_step(tau(38), tau(32)) == 6);
  CHECK(unwrap_step(tau(-5), tau(5)) == -10);
}

TEST_CASE("steps of exactly ±1 are not wrapped") {
  CHECK(unwrap_step(tau(32), tau(-32)) == 64);
  CHECK(unwrap_step(tau(-32), tau(32)) == -64);
}

TEST_CASE("accumulate adds in exact code units") {
  AccumulatedPhase phi{};
  phi = accumulate(phi, 12);
  CHECK(phi.code == 12);
  CHECK(phi.value() == doctest::Approx(0.1875));
}

TEST_CASE("accumulate wraps two's complement") {
  AccumulatedPhase phi{32767};
  phi = accumulate(phi, 1);
  CHECK(phi.code == -32768);
  phi = AccumulatedPhase{-32768};
  phi = accumulate(phi, -1);
  CHECK(phi.code == 32767);
}

TEST_CASE("repeated exact increments accumulate without drift") {
  AccumulatedPhase phi{};
  for (int i = 0; i < 64; ++i) phi = accumulate(phi, 12);
  CHECK(phi.code == 12 * 64);
  CHECK(phi.value() == doctest::Approx(12.0));
}

TEST_CASE("split examples") {
  // code 65: phi = 1.015625 -> m = 1, mu = 1/64
  DelaySplit s = split_phase(AccumulatedPhase{65});
  CHECK(s.m == 1);
  CHECK(s.mu_code == 1);

  // phi = -0.25 (code -16) -> m = -1, mu = 0.75
  s = split_phase(AccumulatedPhase{-16});
  CHECK(s.m == -1);
  CHECK(s.mu_code == 48);

  s = split_phase(AccumulatedPhase{0});
  CHECK(s.m == 0);
  CHECK(s.mu_code == 0);
}

TEST_CASE("m + mu reconstructs phi exactly for all 65536 codes") {
  for (int code = -32768; code <= 32767; ++code) {
    const DelaySplit s = split_phase(AccumulatedPhase{static_cast<std::int16_t>(code)});
    CHECK(s.m * 64 + static_cast<int>(s.mu_code) == code);
    CHECK(s.m >= -512);
    CHECK(s.m <= 511);
    CHECK(s.mu_code <= 63);
  }
}
