#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <span>
#include <stdexcept>
#include <vector>

#include "ffcr/types.hpp"

namespace ffcr {

inline constexpr int kAlignSearchRange = 2048;   // symbols
inline constexpr int kWarmupGuardSymbols = 512;
inline constexpr double kErrorFreeLog10 = -8.0;  // stands in for log10(0)

struct BerReport {
  std::int64_t errors = 0;
  std::int64_t symbols_counted = 0;
  double ber = 0.0;
  int alignment_lag = 0;
  double log10_ber_or_floor = kErrorFreeLog10;
  bool alignment_failed = false;
};

struct SndrReport {
  double sndr_db = 0.0;
  double gain = 0.0;
  double offset = 0.0;
};

struct DecisionResult {
  std::vector<std::uint8_t> bits;
  std::vector<double> symbol_samples;  // sample values at the chosen parity
  int parity = 0;
  double threshold = 0.0;
};

namespace detail {

inline double percentile(std::vector<double> v, double q) {
  const auto idx = static_cast<std::size_t>(q * static_cast<double>(v.size() - 1));
  std::nth_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(idx), v.end());
  return v[idx];
}

}  // namespace detail

// Slices the corrected stream at symbol rate. The ±1-sample parity ambiguity
// is resolved by picking the parity whose samples sit farthest from the mid
// level (widest eye); the decision threshold is the midpoint of the 10th and
// 90th percentile levels.
inline DecisionResult decide_symbols(const std::vector<OutputBlock>& blocks) {
  std::vector<double> stream;
  stream.reserve(blocks.size() * kOutBlockSize);
  for (const auto& b : blocks)
    for (const AdcCode v : b) stream.push_back(static_cast<double>(v));
  if (stream.size() < 64) throw std::invalid_argument("decide_symbols: stream too short");

  double best_score = -1.0;
  int best_parity = 0;
  double best_threshold = 0.0;
  double widest_eye = 0.0;
  for (int parity = 0; parity < 2; ++parity) {
    std::vector<double> vals;
    vals.reserve(stream.size() / 2 + 1);
    for (std::size_t i = static_cast<std::size_t>(parity); i < stream.size(); i += 2)
      vals.push_back(stream[i]);
    const double p10 = detail::percentile(vals, 0.10);
    const double p90 = detail::percentile(vals, 0.90);
    const double mid = 0.5 * (p10 + p90);
    double spread = 0.0;
    for (double v : vals) spread += std::abs(v - mid);
    spread /= static_cast<double>(vals.size());
    widest_eye = std::max(widest_eye, p90 - p10);
    if (spread > best_score) {
      best_score = spread;
      best_parity = parity;
      best_threshold = mid;
    }
  }
  if (widest_eye <= 0.0)
    throw std::runtime_error("decide_symbols: no eye in corrected stream");

  DecisionResult res;
  res.parity = best_parity;
  res.threshold = best_threshold;
  for (std::size_t i = static_cast<std::size_t>(best_parity); i < stream.size(); i += 2) {
    res.symbol_samples.push_back(stream[i]);
    res.bits.push_back(stream[i] > best_threshold ? 1 : 0);
  }
  return res;
}

// Aligns decided bits against the transmitted reference by exhaustive lag
// search (coarse pass on a probe prefix, exact count at the winner) and
// counts errors past a warmup guard. Agreement below 0.9 is a tracking
// failure and reports BER 0.5.
inline BerReport align_and_count(std::span<const std::uint8_t> decided,
                                 std::span<const std::uint8_t> ref) {
  if (decided.size() < 4096)
    throw std::invalid_argument("align_and_count: need at least 4096 decided bits");

  const auto nd = static_cast<std::int64_t>(decided.size());
  const auto nr = static_cast<std::int64_t>(ref.size());

  const std::int64_t probe_begin = kWarmupGuardSymbols;
  const std::int64_t probe_end = std::min<std::int64_t>(nd, probe_begin + 16384);

  int best_lag = 0;
  std::int64_t best_matches = -1;
  for (int lag = -kAlignSearchRange; lag <= kAlignSearchRange; ++lag) {
    std::int64_t matches = 0;
    const std::int64_t lo = std::max<std::int64_t>(probe_begin, -static_cast<std::int64_t>(lag));
    const std::int64_t hi = std::min<std::int64_t>(probe_end, nr - lag);
    for (std::int64_t i = lo; i < hi; ++i)
      matches += (decided[static_cast<std::size_t>(i)] ==
                  ref[static_cast<std::size_t>(i + lag)]);
    if (matches > best_matches) {
      best_matches = matches;
      best_lag = lag;
    }
  }

  std::int64_t errors = 0;
  std::int64_t counted = 0;
  const std::int64_t lo = std::max<std::int64_t>(kWarmupGuardSymbols,
                                                 -static_cast<std::int64_t>(best_lag));
  const std::int64_t hi = std::min<std::int64_t>(nd, nr - best_lag);
  for (std::int64_t i = lo; i < hi; ++i) {
    errors += (decided[static_cast<std::size_t>(i)] !=
               ref[static_cast<std::size_t>(i + best_lag)]);
    ++counted;
  }
  if (counted <= 0) throw std::runtime_error("align_and_count: no overlap at best lag");

  BerReport rep;
  rep.alignment_lag = best_lag;
  rep.errors = errors;
  rep.symbols_counted = counted;
  const double agreement = 1.0 - static_cast<double>(errors) / static_cast<double>(counted);
  if (agreement < 0.9) {
    rep.alignment_failed = true;
    rep.ber = 0.5;
    rep.log10_ber_or_floor = std::log10(0.5);
  } else {
    rep.ber = static_cast<double>(errors) / static_cast<double>(counted);
    rep.log10_ber_or_floor = errors == 0 ? kErrorFreeLog10 : std::log10(rep.ber);
  }
  return rep;
}

// Least-squares fit of the received symbol samples onto the reference levels
// {0,1}; SNDR is fitted signal power over residual power, capped at +60 dB.
inline SndrReport compute_sndr(std::span<const double> symbol_samples,
                               std::span<const std::uint8_t> ref_bits,
                               const BerReport& alignment) {
  const auto ns = static_cast<std::int64_t>(symbol_samples.size());
  const auto nr = static_cast<std::int64_t>(ref_bits.size());
  const int lag = alignment.alignment_lag;
  const std::int64_t lo = std::max<std::int64_t>(kWarmupGuardSymbols,
                                                 -static_cast<std::int64_t>(lag));
  const std::int64_t hi = std::min<std::int64_t>(ns, nr - lag);
  if (hi <= lo) throw std::invalid_argument("compute_sndr: empty overlap");

  double sum_s = 0.0, sum_y = 0.0, sum_ss = 0.0, sum_sy = 0.0;
  const double n = static_cast<double>(hi - lo);
  for (std::int64_t i = lo; i < hi; ++i) {
    const double s = ref_bits[static_cast<std::size_t>(i + lag)];
    const double y = symbol_samples[static_cast<std::size_t>(i)];
    sum_s += s;
    sum_y += y;
    sum_ss += s * s;
    sum_sy += s * y;
  }
  const double var_s = sum_ss - sum_s * sum_s / n;
  if (var_s <= 0.0) throw std::runtime_error("compute_sndr: reference has no transitions");
  const double gain = (sum_sy - sum_s * sum_y / n) / var_s;
  const double offset = (sum_y - gain * sum_s) / n;

  double signal = 0.0, residual = 0.0;
  const double mean_fit = gain * (sum_s / n) + offset;
  for (std::int64_t i = lo; i < hi; ++i) {
    const double s = ref_bits[static_cast<std::size_t>(i + lag)];
    const double y = symbol_samples[static_cast<std::size_t>(i)];
    const double fit = gain * s + offset;
    signal += (fit - mean_fit) * (fit - mean_fit);
    residual += (y - fit) * (y - fit);
  }
  if (signal <= 0.0) throw std::runtime_error("compute_sndr: fit degenerate");

  SndrReport rep;
  rep.gain = gain;
  rep.offset = offset;
  if (residual <= 0.0) {
    rep.sndr_db = 60.0;
  } else {
    rep.sndr_db = std::min(60.0, 10.0 * std::log10(signal / residual));
  }
  return rep;
}

}  // namespace ffcr
