#pragma once

// Counter-based SplitMix64 stream: draw i of seed s is
//   mix(s + (i + 1) * 0x9E3779B97F4A7C15)
// with the SplitMix64 finalizer, mapped to [0, 1) from the top 53 bits.
// The sequence depends only on (seed, i), so it is identical on every
// platform and draws can be generated in any order.

#include <cstdint>

namespace cqd {

class CounterRng {
 public:
  explicit CounterRng(std::uint64_t seed) : seed_(seed) {}

  static constexpr std::uint64_t mix(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  std::uint64_t bits(std::uint64_t index) const {
    return mix(seed_ + (index + 1) * 0x9E3779B97F4A7C15ULL);
  }

  // Uniform on [0, 1).
  double uniform(std::uint64_t index) const {
    return static_cast<double>(bits(index) >> 11) * 0x1.0p-53;
  }

 private:
  std::uint64_t seed_;
};

}  // namespace cqd
