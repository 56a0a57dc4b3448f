#pragma once

#include <atomic>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <limits>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "ffcr/metrics.hpp"
#include "ffcr/pipeline.hpp"
#include "ffcr/reporting.hpp"
#include "ffcr/stimulus.hpp"

namespace ffcr {

struct ExperimentConfig {
  StimulusConfig stimulus{};
  PipelineConfig pipeline{};
  std::vector<double> sweep_ppm;
  int workers = 1;
  std::string trace_csv_path;  // written by single runs when nonempty
  std::string json_path;
  std::string sweep_csv_path;

  void validate() const {
    stimulus.validate();
    pipeline.validate();
    if (workers < 1) throw std::invalid_argument("ExperimentConfig: workers must be >= 1");
  }
};

namespace detail {

inline void digest_mix(std::uint64_t& h, double v) {
  std::uint64_t bits;
  static_assert(sizeof(bits) == sizeof(v));
  std::memcpy(&bits, &v, sizeof(bits));
  for (int i = 0; i < 8; ++i) {
    h ^= (bits >> (8 * i)) & 0xffu;
    h *= 0x100000001b3ull;  // FNV-1a
  }
}

}  // namespace detail

inline std::uint64_t config_digest(const StimulusConfig& s, const PipelineConfig& p) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  detail::digest_mix(h, s.symbol_rate_hz);
  detail::digest_mix(h, static_cast<double>(s.samples_per_symbol));
  detail::digest_mix(h, s.cfo_ppm);
  detail::digest_mix(h, s.snr_db);
  detail::digest_mix(h, static_cast<double>(s.n_symbols));
  detail::digest_mix(h, static_cast<double>(s.seed));
  detail::digest_mix(h, s.rolloff);
  detail::digest_mix(h, static_cast<double>(s.dense_oversampling));
  detail::digest_mix(h, static_cast<double>(s.adc_bits));
  detail::digest_mix(h, s.jitter_rms_ui);
  detail::digest_mix(h, s.initial_phase);
  detail::digest_mix(h, static_cast<double>(p.ma_cycles));
  detail::digest_mix(h, static_cast<double>(p.data_delay_cycles));
  detail::digest_mix(h, static_cast<double>(p.eb.capacity));
  detail::digest_mix(h, static_cast<double>(p.eb.start_fill));
  return h;
}

// Pause bookkeeping: underflow pulses after the reader has started, i.e. en
// cycles that follow the first active cycle.
inline void pause_stats(const std::vector<CycleTrace>& trace, std::int64_t& count,
                        double& mean_interval) {
  count = 0;
  mean_interval = std::numeric_limits<double>::quiet_NaN();
  std::int64_t first_active = -1;
  std::vector<std::int64_t> pauses;
  for (const auto& t : trace) {
    if (first_active < 0) {
      if (t.en == 0) first_active = t.cycle;
      continue;
    }
    if (t.en == 1) pauses.push_back(t.cycle);
  }
  count = static_cast<std::int64_t>(pauses.size());
  if (pauses.size() >= 2) {
    double acc = 0.0;
    for (std::size_t i = 1; i < pauses.size(); ++i)
      acc += static_cast<double>(pauses[i] - pauses[i - 1]);
    mean_interval = acc / static_cast<double>(pauses.size() - 1);
  }
}

// One stimulus -> pipeline -> metrics pass at the given CFO. Pipeline faults
// are captured in the status field; metric-level tracking failures (lost eye,
// failed alignment) are valid measurements and report BER 0.5.
inline RunResult run_experiment(const ExperimentConfig& cfg, double cfo_ppm) {
  cfg.validate();
  StimulusConfig sc = cfg.stimulus;
  sc.cfo_ppm = cfo_ppm;

  RunResult res;
  res.cfo_ppm = cfo_ppm;
  PipelineConfig pc = cfg.pipeline;
  res.config_digest = config_digest(sc, pc);

  const std::vector<std::uint8_t> bits = generate_bits(sc.seed, sc.n_symbols);
  const std::vector<SampleBlock> blocks = make_blocks(bits, sc);

  Pipeline pipe(pc);
  std::vector<OutputBlock> corrected;
  corrected.reserve(blocks.size());
  res.trace.reserve(blocks.size());
  try {
    for (const auto& b : blocks) {
      CycleResult cr = pipe.clock_cycle(b);
      if (cr.output) corrected.push_back(*cr.output);
      if (pc.telemetry) res.trace.push_back(cr.trace);
    }
  } catch (const std::exception& e) {
    res.status = e.what();
    res.ber.ber = std::numeric_limits<double>::quiet_NaN();
    res.ber.log10_ber_or_floor = std::numeric_limits<double>::quiet_NaN();
    res.sndr.sndr_db = std::numeric_limits<double>::quiet_NaN();
  }
  res.cycles = pipe.cycles();
  pause_stats(res.trace, res.pause_count, res.mean_pause_interval);

  if (res.status == "ok") {
    try {
      const DecisionResult dec = decide_symbols(corrected);
      res.ber = align_and_count(dec.bits, bits);
      if (!res.ber.alignment_failed)
        res.sndr = compute_sndr(dec.symbol_samples, bits, res.ber);
      else
        res.sndr.sndr_db = std::numeric_limits<double>::quiet_NaN();
    } catch (const std::exception&) {
      // No usable eye or alignment: a tracking failure, not a fault.
      res.ber.alignment_failed = true;
      res.ber.ber = 0.5;
      res.ber.log10_ber_or_floor = std::log10(0.5);
      res.sndr.sndr_db = std::numeric_limits<double>::quiet_NaN();
    }
  }

  if (!cfg.trace_csv_path.empty()) {
    std::ofstream os(cfg.trace_csv_path);
    if (!os) throw std::runtime_error("cannot open trace file: " + cfg.trace_csv_path);
    write_trace_csv(os, res.trace);
  }
  if (!cfg.json_path.empty()) {
    std::ofstream os(cfg.json_path);
    if (!os) throw std::runtime_error("cannot open json file: " + cfg.json_path);
    write_result_json(os, res);
  }
  return res;
}

// One run per sweep point, optionally on parallel workers. Results keep the
// sweep order; failed runs carry their fault in the status column and do not
// stop the sweep.
inline std::vector<RunResult> sweep_cfo(const ExperimentConfig& cfg) {
  cfg.validate();
  if (cfg.sweep_ppm.empty())
    throw std::invalid_argument("sweep_cfo: sweep list must not be empty");

  ExperimentConfig point_cfg = cfg;
  point_cfg.trace_csv_path.clear();
  point_cfg.json_path.clear();

  std::vector<RunResult> results(cfg.sweep_ppm.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&]() {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= cfg.sweep_ppm.size()) return;
      try {
        results[i] = run_experiment(point_cfg, cfg.sweep_ppm[i]);
      } catch (const std::exception& e) {
        results[i].cfo_ppm = cfg.sweep_ppm[i];
        results[i].status = e.what();
      }
    }
  };

  const std::size_t n_threads =
      std::min<std::size_t>(static_cast<std::size_t>(cfg.workers), cfg.sweep_ppm.size());
  if (n_threads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(n_threads);
    for (std::size_t t = 0; t < n_threads; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }

  if (!cfg.sweep_csv_path.empty()) {
    std::ofstream os(cfg.sweep_csv_path);
    if (!os) throw std::runtime_error("cannot open sweep file: " + cfg.sweep_csv_path);
    write_sweep_csv(os, results, cfg.stimulus.symbol_rate_hz);
  }
  return results;
}

}  // namespace ffcr
