#pragma once

#include <cstdint>

namespace stocournot {

/// Counter-based generator: the k-th draw is splitmix64(seed + (k+1) * golden gamma).
///
/// Draw k depends only on (seed, k), so streams are reproducible bit for bit on any
/// platform and can be split across workers without coordination.
class CounterRng {
public:
  explicit constexpr CounterRng(std::uint64_t seed) noexcept : seed_(seed) {}

  [[nodiscard]] constexpr std::uint64_t bits(std::uint64_t k) const noexcept {
    std::uint64_t z = seed_ + (k + 1) * 0x9E3779B97F4A7C15ULL;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  /// Uniform in the open interval (0, 1): the top 53 bits, offset by half an ulp.
  [[nodiscard]] constexpr double uniform(std::uint64_t k) const noexcept {
    return (static_cast<double>(bits(k) >> 11) + 0.5) * 0x1.0p-53;
  }

  [[nodiscard]] constexpr std::uint64_t seed() const noexcept { return seed_; }

private:
  std::uint64_t seed_;
};

}  // namespace stocournot
