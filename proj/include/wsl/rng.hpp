#pragma once

#include <cstdint>
#include <string_view>

namespace wsl {

/// Seeded 64-bit generator used everywhere randomness enters the lab.
///
/// The state is xoshiro256** seeded through splitmix64. The byte stream is
/// part of the reproducibility contract: traces, CSV files and test fixtures
/// depend on it, so any change to the algorithm must bump `kName`.
class Rng {
public:
  static constexpr std::string_view kName = "xoshiro256**+splitmix64/v1";

  explicit Rng(std::uint64_t seed) noexcept;

  std::uint64_t next() noexcept;

  /// Uniform integer in [0, bound). Unbiased (rejection), bound > 0.
  std::uint64_t below(std::uint64_t bound) noexcept;

  /// Uniform double in [0, 1) with 53 random bits.
  double uniform01() noexcept;

  /// Independent stream for child `index` of `master`. Pure function of
  /// both arguments, so trial seeds do not depend on scheduling order.
  static std::uint64_t derive(std::uint64_t master, std::uint64_t index) noexcept;

private:
  std::uint64_t s_[4];
};

} // namespace wsl
