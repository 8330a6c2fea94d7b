#pragma once

// Seeded randomness contract.
//
// Engine: std::mt19937_64, whose output sequence is fixed by the C++
// standard. Gaussian draws use the Box-Muller transform (cosine branch
// only, two 53-bit uniforms per draw, no cached spare) so that each draw
// depends only on the engine state and not on call history parity.
//
// Sub-seeds for independent streams are derived as
//   sub_seed(base, i) = splitmix64(base + (i + 1) * 0x9E3779B97F4A7C15)
// which lets parallel trials reproduce sequential results exactly.

#include <cstdint>
#include <random>

#include "vtdc/time.hpp"

namespace vtdc {

struct Seed {
  std::uint64_t value = 0;

  constexpr auto operator<=>(const Seed&) const = default;
};

/// SplitMix64 finalizer (Steele, Lea, Flood).
constexpr std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

constexpr Seed sub_seed(Seed base, std::uint64_t index) {
  return Seed{splitmix64(base.value + (index + 1) * 0x9E3779B97F4A7C15ULL)};
}

class Rng {
 public:
  explicit Rng(Seed seed) : engine_(seed.value) {}

  /// Uniform on (0, 1], 53-bit resolution.
  double uniform_open0();

  /// Uniform on [lo, hi).
  double uniform(double lo, double hi);

  double standard_normal();

  /// Normal(0, sigma) rounded to the nearest femtosecond. sigma == 0 returns
  /// 0 without consuming engine output.
  Duration normal_fs(Duration sigma);

 private:
  std::mt19937_64 engine_;
};

}  // namespace vtdc
