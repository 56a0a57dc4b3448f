#pragma once

#include <array>
#include <cstdint>
#include <deque>
#include <optional>
#include <stdexcept>

#include "ffcr/elastic_buffer.hpp"
#include "ffcr/lagrange.hpp"
#include "ffcr/phase_unwrap.hpp"
#include "ffcr/timing_estimator.hpp"
#include "ffcr/types.hpp"

namespace ffcr {

struct PipelineConfig {
  std::size_t block_size = kBlockSize;
  std::size_t ma_cycles = 16;
  // The estimation path is dominated by the boxcar's 7.5-cycle group delay;
  // delaying the data path by 8 keeps the estimate aligned with the samples
  // it describes.
  std::size_t data_delay_cycles = 8;
  EbConfig eb{};
  double epsilon_power = kDefaultEpsilonPower;
  bool telemetry = true;

  void validate() const {
    if (block_size != kBlockSize)
      throw std::invalid_argument("PipelineConfig: block_size must be 256");
    if (ma_cycles == 0)
      throw std::invalid_argument("PipelineConfig: ma_cycles must be positive");
    eb.validate();
  }
};

struct CycleTrace {
  std::int64_t cycle = 0;
  int tau_code = 0;
  int phi_code = 0;
  int m = 0;
  int mu_code = 0;
  int en = 0;  // 1 when the elastic buffer paused this cycle (incl. startup fill)
  std::int64_t fill = 0;
};

struct CycleResult {
  std::optional<OutputBlock> output;
  CycleTrace trace;
};

// One clock domain, one state machine. Per cycle: estimate tau from the input
// block, unwrap into an accumulated delay, split into m and mu, write the
// delayed data block into the elastic buffer, issue a read with m, and
// interpolate the previous cycle's window with its matching mu. The elastic
// buffer read is registered, so output blocks emerge one cycle after the read
// that produced them; the mu path carries the same one-cycle delay.
class Pipeline {
public:
  explicit Pipeline(const PipelineConfig& cfg)
      : cfg_(cfg), ma_(cfg.ma_cycles), eb_(cfg.eb) {
    cfg_.validate();
  }

  void reset() {
    ma_.reset();
    tau_prev_ = TimingEstimate{};
    phi_ = AccumulatedPhase{};
    delay_line_.clear();
    eb_ = ElasticBuffer<AdcCode>(cfg_.eb);
    pending_valid_ = false;
    cycle_ = 0;
  }

  CycleResult clock_cycle(const SampleBlock& in) {
    // Estimation path
    const std::complex<double> c = spectral_correlation(in);
    const std::complex<double> c_smoothed = ma_.update(c);
    const TimingEstimate tau = estimate_tau(c_smoothed, tau_prev_, cfg_.epsilon_power);
    const int delta = unwrap_step(tau, tau_prev_);
    tau_prev_ = tau;
    phi_ = accumulate(phi_, delta);
    const DelaySplit split = split_phase(phi_);

    // Data path, latency-matched to the estimation path
    delay_line_.push_back(in);
    if (delay_line_.size() > cfg_.data_delay_cycles) {
      eb_.write(std::span<const AdcCode>(delay_line_.front()));
      delay_line_.pop_front();
    }

    const auto rr = eb_.read(split.m);

    // Interpolate the window registered on the previous cycle with its mu.
    CycleResult res;
    if (pending_valid_)
      res.output = interpolate(std::span<const AdcCode>(pending_window_),
                               lagrange_basis(pending_mu_));
    pending_valid_ = !rr.paused;
    if (!rr.paused) {
      std::copy(rr.window.begin(), rr.window.end(), pending_window_.begin());
      pending_mu_ = split.mu_code;
    }

    res.trace = CycleTrace{cycle_, tau.code, phi_.code, split.m,
                           static_cast<int>(split.mu_code), rr.paused ? 1 : 0,
                           eb_.fill()};
    ++cycle_;
    return res;
  }

  std::int64_t cycles() const { return cycle_; }
  std::int16_t phi_code() const { return phi_.code; }
  std::int8_t tau_code() const { return tau_prev_.code; }
  const ElasticBuffer<AdcCode>& eb() const { return eb_; }
  const PipelineConfig& config() const { return cfg_; }

private:
  PipelineConfig cfg_;
  MaFilter ma_;
  TimingEstimate tau_prev_{};
  AccumulatedPhase phi_{};
  std::deque<SampleBlock> delay_line_;
  ElasticBuffer<AdcCode> eb_;
  std::array<AdcCode, kReadWindow> pending_window_{};
  std::uint8_t pending_mu_ = 0;
  bool pending_valid_ = false;
  std::int64_t cycle_ = 0;
};

}  // namespace ffcr
