#pragma once

#include <cstdint>
#include <stdexcept>
#include <vector>

namespace ffcr {

// PRBS31-style LFSR (x^31 + x^28 + 1). The seed is whitened with a splitmix64
// step so nearby seeds land on unrelated phases of the sequence.
class PrbsGenerator {
public:
  explicit PrbsGenerator(std::uint64_t seed) {
    std::uint64_t z = seed + 0x9e3779b97f4a7c15ull;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    z ^= z >> 31;
    state_ = static_cast<std::uint32_t>(z) & 0x7fffffffu;
    if (state_ == 0) state_ = 0x7fffffffu;
  }

  std::uint8_t next() {
    const std::uint32_t bit = ((state_ >> 30) ^ (state_ >> 27)) & 1u;
    state_ = ((state_ << 1) | bit) & 0x7fffffffu;
    return static_cast<std::uint8_t>(bit);
  }

private:
  std::uint32_t state_;
};

inline std::vector<std::uint8_t> generate_bits(std::uint64_t seed, std::size_t n) {
  if (n == 0) throw std::invalid_argument("generate_bits: requested an empty stream");
  PrbsGenerator gen(seed);
  std::vector<std::uint8_t> bits(n);
  for (auto& b : bits) b = gen.next();
  return bits;
}

}  // namespace ffcr
