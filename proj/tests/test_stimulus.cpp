#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdint>
#include <span>
#include <vector>

#include "ffcr/stimulus.hpp"

using namespace ffcr;

namespace {

StimulusConfig small_config(std::size_t n_symbols = 4096) {
  StimulusConfig cfg;
  cfg.n_symbols = n_symbols;
  cfg.seed = 3;
  return cfg;
}

// Fractional lag of `segment` inside `reference` near `hint`, via integer
// cross-correlation peak plus parabolic refinement.
double locate_lag(std::span<const double> reference, std::span<const double> segment,
                  std::int64_t hint, int search) {
  double best = -1.0;
  std::int64_t best_lag = hint;
  std::vector<double> scores(static_cast<std::size_t>(2 * search + 1));
  for (int d = -search; d <= search; ++d) {
    const std::int64_t off = hint + d;
    double acc = 0.0;
    for (std::size_t i = 0; i < segment.size(); ++i)
      acc += segment[i] * reference[static_cast<std::size_t>(off + static_cast<std::int64_t>(i))];
    scores[static_cast<std::size_t>(d + search)] = acc;
    if (acc > best) {
      best = acc;
      best_lag = off;
    }
  }
  const auto c = static_cast<std::size_t>(best_lag - hint + search);
  double frac = 0.0;
  if (c > 0 && c + 1 < scores.size()) {
    const double ym = scores[c - 1], y0 = scores[c], yp = scores[c + 1];
    const double den = ym - 2.0 * y0 + yp;
    if (den != 0.0) frac = 0.5 * (ym - yp) / den;
  }
  return static_cast<double>(best_lag) + frac;
}

}  // namespace

TEST_CASE("all-zero bits give an identically zero waveform") {
  auto cfg = small_config(1024);
  std::vector<std::uint8_t> bits(1024, 0);
  const auto wave = synthesize_waveform(bits, cfg);
  for (double v : wave) CHECK(v == 0.0);
}

TEST_CASE("all-one bits settle to a flat level of one") {
  auto cfg = small_config(1024);
  std::vector<std::uint8_t> bits(1024, 1);
  const auto wave = synthesize_waveform(bits, cfg);
  const int dps = 2 * cfg.dense_oversampling;
  const std::size_t lo = static_cast<std::size_t>(2 * cfg.pulse_half_len_symbols) * dps;
  const std::size_t hi = static_cast<std::size_t>(1024 - cfg.pulse_half_len_symbols) * dps;
  for (std::size_t i = lo; i < hi; ++i) CHECK(std::abs(wave[i] - 1.0) < 1e-6);
}

TEST_CASE("alternating bits give a waveform periodic in two symbols") {
  auto cfg = small_config(1024);
  std::vector<std::uint8_t> bits(1024);
  for (std::size_t i = 0; i < bits.size(); ++i) bits[i] = i % 2 ? 0 : 1;
  const auto wave = synthesize_waveform(bits, cfg);
  const int dps = 2 * cfg.dense_oversampling;
  const std::size_t lo = static_cast<std::size_t>(2 * cfg.pulse_half_len_symbols) * dps;
  const std::size_t hi = static_cast<std::size_t>(1024 - 2 * cfg.pulse_half_len_symbols) * dps;
  for (std::size_t i = lo; i < hi; ++i)
    CHECK(wave[i] == doctest::Approx(wave[i + static_cast<std::size_t>(2 * dps)]).epsilon(1e-10));
}

TEST_CASE("zero-offset resampling decimates the dense grid exactly") {
  auto cfg = small_config(2048);
  const auto bits = generate_bits(cfg.seed, cfg.n_symbols);
  const auto wave = synthesize_waveform(bits, cfg);
  const auto stream = sample_with_cfo(wave, cfg);
  REQUIRE(stream.size() == 2 * cfg.n_symbols);
  const std::size_t head =
      static_cast<std::size_t>(cfg.pulse_half_len_symbols) * 2 *
      static_cast<std::size_t>(cfg.dense_oversampling);
  for (std::size_t k = 0; k < stream.size(); ++k) {
    const double want = wave[head + k * static_cast<std::size_t>(cfg.dense_oversampling)];
    CHECK(std::abs(stream[k] - want) < 1e-6);
  }
}

TEST_CASE("accumulated drift at +400 ppm matches eps times elapsed samples") {
  auto cfg = small_config(std::size_t{1} << 16);
  cfg.cfo_ppm = 400.0;
  const auto bits = generate_bits(cfg.seed, cfg.n_symbols);
  const auto wave = synthesize_waveform(bits, cfg);
  const auto stream = sample_with_cfo(wave, cfg);

  StimulusConfig ref_cfg = cfg;
  ref_cfg.cfo_ppm = 0.0;
  auto reference = sample_with_cfo(wave, ref_cfg);

  // zero-mean copies sharpen the correlation peak
  double mean = 0.0;
  for (double v : reference) mean += v;
  mean /= static_cast<double>(reference.size());
  std::vector<double> ref0(reference.size()), str0(stream.size());
  for (std::size_t i = 0; i < reference.size(); ++i) ref0[i] = reference[i] - mean;
  for (std::size_t i = 0; i < stream.size(); ++i) str0[i] = stream[i] - mean;

  const std::size_t seg_len = 2048;
  const std::int64_t p = 8192;
  const std::int64_t q = static_cast<std::int64_t>(stream.size()) - 12288;
  const double lag_p = locate_lag(ref0, std::span<const double>(str0).subspan(
                                            static_cast<std::size_t>(p), seg_len),
                                  p, 16) -
                       static_cast<double>(p);
  const double lag_q = locate_lag(ref0, std::span<const double>(str0).subspan(
                                            static_cast<std::size_t>(q), seg_len),
                                  q, 64) -
                       static_cast<double>(q);
  // the receiver runs fast: by sample k it has slipped eps*k sample periods
  // back along the reference
  const double drift = lag_q - lag_p;
  const double expect = -400e-6 * static_cast<double>(q - p);
  CHECK(drift == doctest::Approx(expect).epsilon(0.01));
}

TEST_CASE("noise power tracks the configured SNR within 5 percent") {
  auto cfg = small_config(std::size_t{1} << 15);
  const auto bits = generate_bits(cfg.seed, cfg.n_symbols);
  const auto wave = synthesize_waveform(bits, cfg);
  const auto clean = sample_with_cfo(wave, cfg);
  StimulusConfig noisy_cfg = cfg;
  noisy_cfg.snr_db = 20.0;
  const auto noisy = sample_with_cfo(wave, noisy_cfg);
  REQUIRE(clean.size() == noisy.size());

  double p_sig = 0.0, p_noise = 0.0;
  for (std::size_t i = 0; i < clean.size(); ++i) {
    p_sig += clean[i] * clean[i];
    const double d = noisy[i] - clean[i];
    p_noise += d * d;
  }
  CHECK(p_noise / p_sig == doctest::Approx(0.01).epsilon(0.05));
}

TEST_CASE("quantizer maps the reference level to the top code") {
  auto cfg = small_config();
  std::vector<double> stream(512, 0.7);
  const auto blocks = quantize_adc(stream, cfg);
  REQUIRE(blocks.size() == 2);
  for (const auto& b : blocks)
    for (auto v : b) CHECK(v == 31);
}

TEST_CASE("quantizer is symmetric up to the mid-rise offset") {
  auto cfg = small_config();
  std::vector<double> stream(512);
  for (std::size_t i = 0; i < stream.size(); ++i) stream[i] = (i % 2) ? 0.63 : -0.63;
  const auto blocks = quantize_adc(stream, cfg);
  const int plus = blocks[0][1];
  const int minus = blocks[0][0];
  CHECK(std::abs(plus + minus) <= 1);
}

TEST_CASE("chunking drops the remainder") {
  auto cfg = small_config();
  std::vector<double> stream(700, 0.5);
  stream[0] = 1.0;  // avoid a degenerate percentile
  CHECK(quantize_adc(stream, cfg).size() == 2);
}

TEST_CASE("all-zero stream is rejected") {
  auto cfg = small_config();
  std::vector<double> stream(512, 0.0);
  CHECK_THROWS_WITH_AS((void)quantize_adc(stream, cfg),
                       "quantize_adc: degenerate input power", std::runtime_error);
}

TEST_CASE("sampling beyond the waveform extent is an error") {
  auto cfg = small_config(1024);
  const auto bits = generate_bits(cfg.seed, cfg.n_symbols);
  const auto wave = synthesize_waveform(bits, cfg);
  StimulusConfig longer = cfg;
  longer.n_symbols = 4096;  // asks for samples the waveform cannot cover
  CHECK_THROWS_AS((void)sample_with_cfo(wave, longer), std::out_of_range);
}

TEST_CASE("codes always stay inside the ADC range") {
  auto cfg = small_config(512);
  for (int bits_n : {4, 6}) {
    cfg.adc_bits = bits_n;
    cfg.snr_db = 10.0;  // heavy noise to push the rails
    const auto bits = generate_bits(9, cfg.n_symbols);
    const auto blocks = make_blocks(bits, cfg);
    const int hi = (1 << (bits_n - 1)) - 1;
    const int lo = -(1 << (bits_n - 1));
    for (const auto& b : blocks)
      for (auto v : b) {
        CHECK(v <= hi);
        CHECK(v >= lo);
      }
  }
}

TEST_CASE("identical configs produce bit-identical blocks") {
  auto cfg = small_config(2048);
  cfg.snr_db = 15.0;
  cfg.cfo_ppm = -250.0;
  cfg.jitter_rms_ui = 0.01;
  const auto bits = generate_bits(cfg.seed, cfg.n_symbols);
  const auto a = make_blocks(bits, cfg);
  const auto b = make_blocks(bits, cfg);
  REQUIRE(a.size() == b.size());
  for (std::size_t i = 0; i < a.size(); ++i) CHECK(a[i] == b[i]);
}

TEST_CASE("config validation rejects bad fields") {
  StimulusConfig cfg;
  cfg.samples_per_symbol = 4;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
  cfg = StimulusConfig{};
  cfg.dense_oversampling = 4;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
  cfg = StimulusConfig{};
  cfg.rolloff = 1.5;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
  cfg = StimulusConfig{};
  cfg.n_symbols = 100;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
}
