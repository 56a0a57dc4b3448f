#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <span>
#include <stdexcept>
#include <vector>

#include "ffcr/prbs.hpp"
#include "ffcr/types.hpp"

namespace ffcr {

struct StimulusConfig {
  double symbol_rate_hz = 30e9;
  int samples_per_symbol = 2;   // the estimator requires exactly 2
  double cfo_ppm = 0.0;         // > 0: receiver sampling clock runs fast
  double snr_db = std::numeric_limits<double>::infinity();
  std::size_t n_symbols = std::size_t{1} << 18;
  std::uint64_t seed = 1;
  double rolloff = 0.3;
  int dense_oversampling = 8;   // dense grid points per receiver sample
  int adc_bits = 6;
  double jitter_rms_ui = 0.0;   // per-sample timing jitter, unit intervals
  double initial_phase = 0.0;   // sample periods in [0, 2)
  int pulse_half_len_symbols = 16;

  // One-shot sampling-phase step (sample periods), applied from the given
  // receiver sample onward. Used by step-response tests; 0 disables it.
  double phase_step = 0.0;
  std::size_t phase_step_at_sample = 0;

  double sample_rate_hz() const { return symbol_rate_hz * samples_per_symbol; }
  double cfo() const { return cfo_ppm * 1e-6; }

  void validate() const {
    if (samples_per_symbol != 2)
      throw std::invalid_argument("StimulusConfig: samples_per_symbol must be 2");
    if (dense_oversampling < 8)
      throw std::invalid_argument("StimulusConfig: dense_oversampling must be >= 8");
    if (rolloff < 0.0 || rolloff > 1.0)
      throw std::invalid_argument("StimulusConfig: rolloff must be in [0, 1]");
    if (n_symbols < 2 * kBlockSize)
      throw std::invalid_argument("StimulusConfig: need at least 512 symbols");
    if (adc_bits < 2 || adc_bits > 7)
      throw std::invalid_argument("StimulusConfig: adc_bits must be in [2, 7]");
    if (initial_phase < 0.0 || initial_phase >= 2.0)
      throw std::invalid_argument("StimulusConfig: initial_phase must be in [0, 2)");
    if (pulse_half_len_symbols < 4)
      throw std::invalid_argument("StimulusConfig: pulse_half_len_symbols must be >= 4");
  }
};

namespace detail {

inline double sinc(double x) {
  if (std::abs(x) < 1e-12) return 1.0;
  const double px = std::numbers::pi * x;
  return std::sin(px) / px;
}

// Raised-cosine pulse, unit peak, zeros at nonzero integer symbol offsets.
inline double raised_cosine(double t_sym, double beta) {
  if (beta > 0.0) {
    const double d = 2.0 * beta * t_sym;
    if (std::abs(std::abs(d) - 1.0) < 1e-9)
      return (std::numbers::pi / 4.0) * sinc(1.0 / (2.0 * beta));
    return sinc(t_sym) * std::cos(std::numbers::pi * beta * t_sym) / (1.0 - d * d);
  }
  return sinc(t_sym);
}

// Deterministic standard-normal stream (xorshift-free splitmix64 + Box-Muller).
class NormalGen {
public:
  explicit NormalGen(std::uint64_t seed) : state_(seed) {}

  double next() {
    if (have_) {
      have_ = false;
      return cached_;
    }
    const double u1 = next_unit();
    const double u2 = next_unit();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double a = 2.0 * std::numbers::pi * u2;
    cached_ = r * std::sin(a);
    have_ = true;
    return r * std::cos(a);
  }

private:
  double next_unit() {
    // (0, 1], so log() above is finite
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ull);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    z ^= z >> 31;
    return (static_cast<double>(z >> 11) + 1.0) * 0x1.0p-53;
  }

  std::uint64_t state_;
  double cached_ = 0.0;
  bool have_ = false;
};

inline std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t salt) {
  std::uint64_t z = seed ^ (salt * 0xff51afd7ed558ccdull);
  z = (z ^ (z >> 33)) * 0xc4ceb9fe1a85ec53ull;
  return z ^ (z >> 33);
}

// Dense samples the receiver may ask for, with interpolator guard included.
inline std::size_t required_dense_length(const StimulusConfig& cfg, std::size_t n_bits) {
  const int dps = 2 * cfg.dense_oversampling;  // dense points per symbol
  const double eps = cfg.cfo();
  const double n_samples = static_cast<double>(2 * n_bits);
  double max_pos = n_samples / (1.0 - std::abs(eps));
  max_pos += 2.0 + std::abs(cfg.phase_step) + 10.0 * (2.0 * cfg.jitter_rms_ui) + 4.0;
  const std::size_t head = static_cast<std::size_t>(cfg.pulse_half_len_symbols) * dps;
  return head + static_cast<std::size_t>(std::ceil(max_pos * cfg.dense_oversampling)) + 16;
}

}  // namespace detail

// Pulse-shapes a bitstream onto a dense grid (2 * dense_oversampling points
// per symbol). The truncated raised-cosine tap table is renormalized per
// polyphase branch so that the shifted pulses sum to exactly one: an all-ones
// stream settles to a flat level and the DC gain is exactly unity.
inline std::vector<double> synthesize_waveform(std::span<const std::uint8_t> bits,
                                               const StimulusConfig& cfg) {
  cfg.validate();
  if (bits.empty()) throw std::invalid_argument("synthesize_waveform: empty bitstream");

  const int dps = 2 * cfg.dense_oversampling;
  const int half = cfg.pulse_half_len_symbols;
  const int table_len = 2 * half * dps + 1;

  std::vector<double> pulse(static_cast<std::size_t>(table_len));
  for (int i = 0; i < table_len; ++i) {
    const double t_sym = static_cast<double>(i - half * dps) / static_cast<double>(dps);
    pulse[static_cast<std::size_t>(i)] = detail::raised_cosine(t_sym, cfg.rolloff);
  }
  // Per-branch normalization: for each dense phase, the taps one symbol apart
  // must sum to 1 so that sum_k p(t - kT) == 1 on the whole grid.
  for (int phase = 0; phase < dps; ++phase) {
    double s = 0.0;
    for (int i = phase; i < table_len; i += dps) s += pulse[static_cast<std::size_t>(i)];
    for (int i = phase; i < table_len; i += dps) pulse[static_cast<std::size_t>(i)] /= s;
  }

  const std::size_t len = detail::required_dense_length(cfg, bits.size());
  std::vector<double> wave(len, 0.0);
  for (std::size_t k = 0; k < bits.size(); ++k) {
    if (!bits[k]) continue;
    const std::size_t center = (static_cast<std::size_t>(half) + k) * static_cast<std::size_t>(dps);
    const std::size_t begin = center - static_cast<std::size_t>(half * dps);
    for (int i = 0; i < table_len; ++i) {
      const std::size_t idx = begin + static_cast<std::size_t>(i);
      if (idx < len) wave[idx] += pulse[static_cast<std::size_t>(i)];
    }
  }
  return wave;
}

// Resamples the dense waveform at the detuned receiver clock:
//   t_k = (k/(1+eps) + initial_phase + step_k + jitter_k) * T_nominal.
// Interpolation is a 16-tap Blackman-windowed sinc on the dense grid, with
// the kernel normalized to unit sum so a zero fractional offset is exact.
// AWGN at snr_db (relative to the mean power of the resampled signal) is
// added after resampling; infinite snr_db disables it.
inline std::vector<double> sample_with_cfo(std::span<const double> waveform,
                                           const StimulusConfig& cfg) {
  cfg.validate();
  const int D = cfg.dense_oversampling;
  const double eps = cfg.cfo();
  const double inv_rate = 1.0 / (1.0 + eps);
  const std::size_t n_out = 2 * cfg.n_symbols;
  const std::size_t head = static_cast<std::size_t>(cfg.pulse_half_len_symbols) * 2 *
                           static_cast<std::size_t>(D);

  constexpr int kHalfTaps = 8;
  detail::NormalGen jitter_gen(detail::mix_seed(cfg.seed, 0x6a09e667f3bcc909ull));
  const double jitter_samples = 2.0 * cfg.jitter_rms_ui;  // UI -> sample periods

  std::vector<double> out(n_out);
  for (std::size_t k = 0; k < n_out; ++k) {
    double pos = static_cast<double>(k) * inv_rate + cfg.initial_phase;
    if (cfg.phase_step != 0.0 && k >= cfg.phase_step_at_sample) pos += cfg.phase_step;
    if (jitter_samples != 0.0) {
      double j = jitter_samples * jitter_gen.next();
      j = std::clamp(j, -8.0 * jitter_samples, 8.0 * jitter_samples);
      pos += j;
    }
    const double dense_x = static_cast<double>(head) + pos * static_cast<double>(D);
    const double floor_x = std::floor(dense_x);
    const auto i0 = static_cast<std::int64_t>(floor_x);
    const double frac = dense_x - floor_x;

    if (i0 - (kHalfTaps - 1) < 0 ||
        i0 + kHalfTaps >= static_cast<std::int64_t>(waveform.size()))
      throw std::out_of_range("sample_with_cfo: evaluation beyond waveform extent");

    if (frac == 0.0) {
      out[k] = waveform[static_cast<std::size_t>(i0)];
      continue;
    }

    // sinc(j - frac) = -(-1)^j sin(pi*frac) / (pi*(j - frac))
    const double sin_pf = std::sin(std::numbers::pi * frac);
    double acc = 0.0;
    double ksum = 0.0;
    double sign = -1.0;  // (-1)^j for j = -7
    for (int j = -(kHalfTaps - 1); j <= kHalfTaps; ++j) {
      const double u = static_cast<double>(j) - frac;
      const double s = -sign * sin_pf / (std::numbers::pi * u);
      const double w = 0.42 + 0.5 * std::cos(std::numbers::pi * u / kHalfTaps) +
                       0.08 * std::cos(2.0 * std::numbers::pi * u / kHalfTaps);
      const double kern = s * w;
      ksum += kern;
      acc += kern * waveform[static_cast<std::size_t>(i0 + j)];
      sign = -sign;
    }
    out[k] = acc / ksum;
  }

  if (std::isfinite(cfg.snr_db)) {
    double p = 0.0;
    for (double v : out) p += v * v;
    p /= static_cast<double>(out.size());
    const double sigma = std::sqrt(p * std::pow(10.0, -cfg.snr_db / 10.0));
    detail::NormalGen noise_gen(detail::mix_seed(cfg.seed, 0xbb67ae8584caa73bull));
    for (double& v : out) v += sigma * noise_gen.next();
  }
  return out;
}

// Automatic gain plus uniform mid-rise quantization: the 99.9th-percentile
// magnitude maps to the top code, floor quantization with saturation, and the
// stream is chopped into 256-sample blocks (remainder dropped).
inline std::vector<SampleBlock> quantize_adc(std::span<const double> stream,
                                             const StimulusConfig& cfg) {
  cfg.validate();
  if (stream.size() < kBlockSize)
    throw std::invalid_argument("quantize_adc: stream shorter than one block");

  std::vector<double> mags(stream.size());
  for (std::size_t i = 0; i < stream.size(); ++i) mags[i] = std::abs(stream[i]);
  const std::size_t idx =
      static_cast<std::size_t>(0.999 * static_cast<double>(mags.size() - 1));
  std::nth_element(mags.begin(), mags.begin() + static_cast<std::ptrdiff_t>(idx), mags.end());
  const double ref = mags[idx];
  if (ref <= 0.0) throw std::runtime_error("quantize_adc: degenerate input power");

  const int hi = (1 << (cfg.adc_bits - 1)) - 1;
  const int lo = -(1 << (cfg.adc_bits - 1));
  const double gain = static_cast<double>(hi) / ref;

  const std::size_t n_blocks = stream.size() / kBlockSize;
  std::vector<SampleBlock> blocks(n_blocks);
  for (std::size_t b = 0; b < n_blocks; ++b) {
    for (std::size_t i = 0; i < kBlockSize; ++i) {
      const double v = stream[b * kBlockSize + i] * gain;
      auto code = static_cast<int>(std::floor(v + 1e-9));
      code = std::clamp(code, lo, hi);
      blocks[b][i] = static_cast<AdcCode>(code);
    }
  }
  return blocks;
}

// Convenience: bits -> dense waveform -> detuned sampling -> ADC blocks.
inline std::vector<SampleBlock> make_blocks(std::span<const std::uint8_t> bits,
                                            const StimulusConfig& cfg) {
  const std::vector<double> wave = synthesize_waveform(bits, cfg);
  const std::vector<double> stream = sample_with_cfo(wave, cfg);
  return quantize_adc(stream, cfg);
}

}  // namespace ffcr
