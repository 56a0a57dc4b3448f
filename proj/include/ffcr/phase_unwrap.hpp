#pragma once

#include <cstdint>

#include "ffcr/timing_estimator.hpp"

namespace ffcr {

// Unwrapped delay accumulator, 16-bit Q10.6 two's complement: value = code/64
// sample periods. Wraps modulo 1024 sample periods, never saturates.
struct AccumulatedPhase {
  std::int16_t code = 0;
  double value() const { return code / 64.0; }
};

// MSB/LSB split of the accumulated phase: m + mu_code/64 == code/64 exactly.
struct DelaySplit {
  int m = 0;                  // integer delay, 10-bit signed [-512, 511]
  std::uint8_t mu_code = 0;   // fractional delay, mu = mu_code/64 in [0, 63/64]
  double mu() const { return mu_code / 64.0; }
};

// Edge detector. Consecutive estimates live on a circle of circumference 2
// sample periods (one symbol), so steps beyond ±1 wrap back. Exact 1/64 code
// arithmetic throughout.
inline int unwrap_step(TimingEstimate now, TimingEstimate prev) {
  int d = static_cast<int>(now.code) - static_cast<int>(prev.code);
  if (d > kTauScale) d -= 2 * kTauScale;
  else if (d < -kTauScale) d += 2 * kTauScale;
  return d;
}

inline AccumulatedPhase accumulate(AccumulatedPhase phi, int delta_code) {
  const std::uint16_t wrapped = static_cast<std::uint16_t>(
      static_cast<std::uint16_t>(phi.code) + static_cast<std::uint16_t>(delta_code));
  return AccumulatedPhase{static_cast<std::int16_t>(wrapped)};
}

inline DelaySplit split_phase(AccumulatedPhase phi) {
  DelaySplit s;
  s.m = static_cast<int>(phi.code >> 6);  // arithmetic shift: floor semantics
  s.mu_code = static_cast<std::uint8_t>(phi.code & 63);
  return s;
}

}  // namespace ffcr
