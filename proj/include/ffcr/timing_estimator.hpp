#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <vector>

#include "ffcr/fft.hpp"
#include "ffcr/types.hpp"

namespace ffcr {

// Quantized fractional timing phase: value = code/64 sample periods in [-1, 1).
// One unit equals one receiver sample period; the estimate spans one symbol,
// so the quantity lives on a circle of circumference 2.
struct TimingEstimate {
  std::int8_t code = 0;  // [-64, 63]
  double value() const { return code / 64.0; }
};

inline constexpr int kTauScale = 64;

// Correlations weaker than this carry no usable phase; we hold the previous
// estimate instead. Scaled to ~1e-12 of a full-scale block correlation.
inline constexpr double kDefaultEpsilonPower =
    1e-12 * static_cast<double>(kBlockSize) * static_cast<double>(kBlockSize) * 1024.0;

// Symbol-rate spectral line of one 256-sample block at 2 samples/symbol:
// correlate DFT bins half the transform apart over the lower half-spectrum.
// A signal delayed by d sample periods advances the argument by pi*d.
inline std::complex<double> spectral_correlation(const SampleBlock& block) {
  std::array<std::complex<double>, kBlockSize> x;
  for (std::size_t n = 0; n < kBlockSize; ++n)
    x[n] = {static_cast<double>(block[n]), 0.0};
  fft_inplace(x);
  std::complex<double> c{0.0, 0.0};
  for (std::size_t k = 0; k < kBlockSize / 2; ++k)
    c += std::conj(x[k]) * x[k + kBlockSize / 2];
  return c;
}

// Boxcar over the complex correlation. Averaging the phasor rather than the
// wrapped angle keeps the smoothing well-defined across the ±1 boundary.
class MaFilter {
public:
  explicit MaFilter(std::size_t length = 16) : ring_(length, {0.0, 0.0}) {}

  std::complex<double> update(std::complex<double> c) {
    ring_[idx_] = c;
    idx_ = (idx_ + 1) % ring_.size();
    // Recomputed from the ring so the running sum matches its contents exactly.
    sum_ = {0.0, 0.0};
    for (const auto& v : ring_) sum_ += v;
    return sum_ / static_cast<double>(ring_.size());
  }

  std::complex<double> sum() const { return sum_; }
  std::size_t length() const { return ring_.size(); }

  void reset() {
    std::fill(ring_.begin(), ring_.end(), std::complex<double>{0.0, 0.0});
    sum_ = {0.0, 0.0};
    idx_ = 0;
  }

private:
  std::vector<std::complex<double>> ring_;
  std::complex<double> sum_{0.0, 0.0};
  std::size_t idx_ = 0;
};

// arg(c)/pi rounded to the nearest 1/64, with +1 wrapping to -1.
inline TimingEstimate estimate_tau(std::complex<double> c_smoothed, TimingEstimate prev,
                                   double epsilon_power = kDefaultEpsilonPower) {
  if (std::abs(c_smoothed) < epsilon_power) return prev;
  const double tau = std::arg(c_smoothed) / std::numbers::pi;  // (-1, 1]
  long code = std::lround(tau * kTauScale);
  if (code >= kTauScale) code -= 2 * kTauScale;
  if (code < -kTauScale) code += 2 * kTauScale;
  return TimingEstimate{static_cast<std::int8_t>(code)};
}

// Estimate update rate: one estimate per block of 256 samples.
inline double estimate_update_rate_hz(double sample_rate_hz) {
  return sample_rate_hz / static_cast<double>(kBlockSize);
}

// Boxcar magnitude response at normalized frequency f (cycles per update).
inline double ma_response(std::size_t taps, double f) {
  const double num = std::sin(std::numbers::pi * f * static_cast<double>(taps));
  const double den = static_cast<double>(taps) * std::sin(std::numbers::pi * f);
  if (std::abs(den) < 1e-300) return 1.0;
  return std::abs(num / den);
}

}  // namespace ffcr
