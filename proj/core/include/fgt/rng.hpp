#pragma once

#include <cstdint>
#include <random>

namespace fgt {

/// Seeded Gaussian/uniform source. One instance per logical stream; streams
/// for grid points, sensor channels etc. are derived with derive_stream() so
/// results do not depend on evaluation order.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  /// N(mean, sd); sd == 0 returns mean without consuming engine state.
  double gaussian(double mean, double sd);
  double uniform(double lo, double hi);
  std::uint64_t next_u64() { return engine_(); }

 private:
  std::mt19937_64 engine_;
};

/// splitmix64-based mixing of (seed, a, b) into an independent stream seed.
std::uint64_t derive_stream(std::uint64_t seed, std::uint64_t a, std::uint64_t b = 0);

/// Stream-id tags for the top-level experiment stages.
namespace rng_domain {
inline constexpr std::uint64_t kCalibration = 1;
inline constexpr std::uint64_t kBaseline = 2;
inline constexpr std::uint64_t kGrid = 3;
inline constexpr std::uint64_t kTrim = 4;
}  // namespace rng_domain

}  // namespace fgt
