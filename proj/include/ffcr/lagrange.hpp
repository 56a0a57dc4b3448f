#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

#include "ffcr/types.hpp"

namespace ffcr {

inline constexpr int kCoeffFracBits = 14;  // Q2.14 coefficients
inline constexpr std::int32_t kCoeffOne = 1 << kCoeffFracBits;

struct InterpCoeffs {
  std::array<std::int32_t, 4> c{};  // Q2.14, taps at offsets {-1, 0, +1, +2}
};

// Cubic Lagrange basis on support points {-1, 0, +1, +2}, evaluated at mu in
// [0, 1) past the second tap.
inline std::array<double, 4> lagrange_basis_exact(double mu) {
  return {
      -mu * (mu - 1.0) * (mu - 2.0) / 6.0,
      (mu + 1.0) * (mu - 1.0) * (mu - 2.0) / 2.0,
      -(mu + 1.0) * mu * (mu - 2.0) / 2.0,
      (mu + 1.0) * mu * (mu - 1.0) / 6.0,
  };
}

// Quantized basis. The rounding residue is folded into the center tap so the
// coefficients sum to exactly one in code arithmetic (unit DC gain).
inline InterpCoeffs lagrange_basis(std::uint8_t mu_code) {
  if (mu_code > 63) throw std::invalid_argument("lagrange_basis: mu code out of range");
  const std::array<double, 4> exact = lagrange_basis_exact(mu_code / 64.0);
  InterpCoeffs q;
  std::int32_t sum = 0;
  for (int j = 0; j < 4; ++j) {
    q.c[j] = static_cast<std::int32_t>(std::lround(exact[j] * kCoeffOne));
    sum += q.c[j];
  }
  q.c[1] += kCoeffOne - sum;
  return q;
}

// y[i] = sum_j c[j] * window[i+j] for i = 0..257; window[i+1] is the current
// sample. 32-bit accumulation, round half away from zero, saturate to 6 bits.
inline OutputBlock interpolate(std::span<const AdcCode> window, const InterpCoeffs& k) {
  if (window.size() != kReadWindow)
    throw std::invalid_argument("interpolate: window must hold 261 samples");
  OutputBlock out{};
  for (std::size_t i = 0; i < kOutBlockSize; ++i) {
    std::int32_t acc = 0;
    for (std::size_t j = 0; j < 4; ++j)
      acc += k.c[j] * static_cast<std::int32_t>(window[i + j]);
    const std::int32_t mag = std::abs(acc);
    std::int32_t y = (mag + kCoeffOne / 2) >> kCoeffFracBits;
    if (acc < 0) y = -y;
    y = std::clamp(y, kAdcMin, kAdcMax);
    out[i] = static_cast<AdcCode>(y);
  }
  return out;
}

// Pre-rounding path for arbitrary sample types and window lengths; produces
// window.size() - 3 values. Used where quantization would get in the way.
template <typename Sample>
inline std::vector<double> interpolate_exact(std::span<const Sample> window,
                                             const InterpCoeffs& k) {
  if (window.size() < 4)
    throw std::invalid_argument("interpolate_exact: window too short");
  std::vector<double> out(window.size() - 3);
  const double scale = 1.0 / static_cast<double>(kCoeffOne);
  for (std::size_t i = 0; i < out.size(); ++i) {
    double acc = 0.0;
    for (std::size_t j = 0; j < 4; ++j)
      acc += static_cast<double>(k.c[j]) * static_cast<double>(window[i + j]);
    out[i] = acc * scale;
  }
  return out;
}

}  // namespace ffcr
