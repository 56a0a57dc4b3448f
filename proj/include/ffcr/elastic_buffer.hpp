#pragma once

#include <cstdint>
#include <cstdlib>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "ffcr/types.hpp"

namespace ffcr {

struct EbConfig {
  int write_width = static_cast<int>(kBlockSize);
  int read_width = static_cast<int>(kReadWindow);    // out_width + 3 taps of memory
  int out_width = static_cast<int>(kOutBlockSize);
  int capacity = 1024;    // samples
  int start_fill = 512;   // reads begin once this many samples are buffered
  int slew_limit = 2;     // largest |delta m| accepted per read

  void validate() const {
    if (write_width < 1) throw std::invalid_argument("EbConfig: write_width must be positive");
    if (out_width <= write_width)
      throw std::invalid_argument("EbConfig: out_width must exceed write_width");
    if (read_width != out_width + 3)
      throw std::invalid_argument("EbConfig: read_width must be out_width + 3");
    if (start_fill < read_width)
      throw std::invalid_argument("EbConfig: start_fill must cover one read window");
    if (capacity < start_fill)
      throw std::invalid_argument("EbConfig: capacity must be at least start_fill");
  }
};

class EbOverflowError : public std::runtime_error {
public:
  explicit EbOverflowError(const std::string& what) : std::runtime_error(what) {}
};

class EbSlewError : public std::runtime_error {
public:
  explicit EbSlewError(const std::string& what) : std::runtime_error(what) {}
};

// Ring buffer written write_width samples per cycle and read read_width per
// cycle. The read bus is wider than the write bus, so the reader outpaces the
// writer and the buffer can never overflow; it regularly underflows instead,
// which pauses the reader for one cycle while the next write refills it.
// Integer-delay changes correct the read address of the window being served,
// so the window always carries the same delay state as the fractional offset
// computed alongside it: a decrement repeats one sample at the seam into this
// window, an increment skips one. Pauses lose nothing; the reader resumes at
// the same logical sample position.
template <typename Sample = AdcCode>
class ElasticBuffer {
public:
  struct ReadResult {
    bool paused = true;
    // read_width samples, valid until the next read() call
    std::span<const Sample> window{};
  };

  explicit ElasticBuffer(const EbConfig& cfg) : cfg_(cfg) {
    cfg_.validate();
    ring_.resize(static_cast<std::size_t>(cfg_.capacity));
    scratch_.resize(static_cast<std::size_t>(cfg_.read_width));
  }

  void write(std::span<const Sample> block) {
    if (static_cast<int>(block.size()) != cfg_.write_width)
      throw std::invalid_argument("ElasticBuffer::write: block width mismatch");
    const std::int64_t cap = cfg_.capacity;
    for (std::size_t i = 0; i < block.size(); ++i)
      ring_[static_cast<std::size_t>((total_written_ + static_cast<std::int64_t>(i)) % cap)] =
          block[i];
    total_written_ += static_cast<std::int64_t>(block.size());
    // A write may only reclaim slots the reader still needs. The next window
    // base can reach back to read_pos + dm - 3 with |dm| <= slew_limit.
    const std::int64_t needed_base =
        started_ ? read_pos_ - kInterpMemory - cfg_.slew_limit : 0;
    if (total_written_ - needed_base > cap)
      throw EbOverflowError("elastic buffer overflow: write reached unread data");
  }

  // Write-then-read cycle order: call after this cycle's write.
  ReadResult read(int m) {
    if (!started_) {
      if (fill() < cfg_.start_fill) {
        paused_last_ = true;
        return {};
      }
      started_ = true;
      read_pos_ = kInterpMemory;  // leave room for the 3 look-back taps
      last_m_ = m;                // the start margin absorbs the initial delay
    }

    const int dm = m - last_m_;
    if (std::abs(dm) > cfg_.slew_limit)
      throw EbSlewError("integer delay slew exceeded: delta m = " + std::to_string(dm));

    // fill after serving this window and advancing past it
    if (fill() < static_cast<std::int64_t>(cfg_.out_width + dm)) {
      paused_last_ = true;
      return {};
    }

    const std::int64_t corrected = read_pos_ + dm;  // address correction
    const std::int64_t base = corrected - kInterpMemory;
    const std::int64_t cap = cfg_.capacity;
    for (int i = 0; i < cfg_.read_width; ++i)
      scratch_[static_cast<std::size_t>(i)] =
          ring_[static_cast<std::size_t>((base + i) % cap)];
    read_pos_ = corrected + cfg_.out_width;
    last_m_ = m;
    paused_last_ = false;
    return {false, std::span<const Sample>(scratch_)};
  }

  std::int64_t fill() const { return total_written_ - read_pos_; }
  std::int64_t total_written() const { return total_written_; }
  std::int64_t read_position() const { return read_pos_; }
  int last_m() const { return last_m_; }
  bool started() const { return started_; }
  bool paused_last_cycle() const { return paused_last_; }
  const EbConfig& config() const { return cfg_; }

private:
  static constexpr int kInterpMemory = 3;

  EbConfig cfg_;
  std::vector<Sample> ring_;
  std::vector<Sample> scratch_;
  std::int64_t total_written_ = 0;
  std::int64_t read_pos_ = 0;
  int last_m_ = 0;
  bool started_ = false;
  bool paused_last_ = false;
};

}  // namespace ffcr
