#pragma once

#include <array>
#include <cstddef>
#include <cstdint>

namespace ffcr {

// Bus geometry of the datapath: 256 samples enter per cycle, the elastic
// buffer serves a 261-sample window (258 interpolator outputs plus 3 samples
// of interpolator memory), and 258 corrected samples leave per cycle.
inline constexpr std::size_t kBlockSize = 256;
inline constexpr std::size_t kOutBlockSize = 258;
inline constexpr std::size_t kReadWindow = 261;

// 6-bit signed ADC codes.
inline constexpr int kAdcMin = -32;
inline constexpr int kAdcMax = 31;

using AdcCode = std::int8_t;
using SampleBlock = std::array<AdcCode, kBlockSize>;
using OutputBlock = std::array<AdcCode, kOutBlockSize>;

}  // namespace ffcr
