#pragma once

#include <cstdint>

namespace tally {

/// SplitMix64 (Steele, Lea and Flood 2014), the generator behind every
/// seeded procedure in the library. The output sequence is frozen: changing
/// it would change synthetic databases and query streams.
///
/// Streams are split by hashing (seed, stream id) into a fresh state, so a
/// per-column or per-purpose generator never depends on how many numbers
/// another stream consumed.
class SplitMix64 {
 public:
  static constexpr std::uint32_t kVersion = 1;

  explicit constexpr SplitMix64(std::uint64_t seed) noexcept : state_(seed) {}

  constexpr SplitMix64(std::uint64_t seed, std::uint64_t stream) noexcept
      : state_(mix(seed ^ mix(stream + 0x632be59bd9b4e019ULL))) {}

  constexpr std::uint64_t next() noexcept {
    state_ += 0x9e3779b97f4a7c15ULL;
    return mix(state_);
  }

  /// Uniform integer in [0, bound). Rejection sampling keeps it unbiased and
  /// the rejection rule is part of the frozen sequence.
  constexpr std::uint64_t uniform(std::uint64_t bound) noexcept {
    if (bound <= 1) return 0;
    const std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % bound);
    std::uint64_t x = next();
    while (x >= limit) x = next();
    return x % bound;
  }

  /// Uniform double in [0, 1) from the top 53 bits.
  constexpr double uniform_real() noexcept {
    return static_cast<double>(next() >> 11) * 0x1.0p-53;
  }

  static constexpr std::uint64_t mix(std::uint64_t z) noexcept {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

 private:
  std::uint64_t state_;
};

}  // namespace tally
