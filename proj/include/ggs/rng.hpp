#pragma once

#include <cstdint>
#include <optional>

namespace ggs {

/// xoshiro256** (Blackman & Vigna) seeded by expanding a 64-bit seed through
/// splitmix64. Uniforms use the top 53 bits; normals use the Box-Muller
/// transform. Every step is integer or IEEE-754 arithmetic with a fixed
/// order of operations, so streams are identical across platforms.
class Rng {
 public:
  explicit Rng(std::uint64_t seed);

  std::uint64_t next_u64();

  /// Uniform on [0, 1).
  double uniform();

  /// Standard normal. Box-Muller produces pairs; the second value is cached.
  double normal();

  /// Uniform integer in [0, bound), bound > 0 (Lemire's rejection method).
  std::uint64_t below(std::uint64_t bound);

 private:
  std::uint64_t state_[4];
  std::optional<double> spare_normal_;
};

std::uint64_t splitmix64(std::uint64_t& state);

/// Seed for an independent sub-stream, e.g. the solution vector of a problem
/// whose matrix was generated from `seed`.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream);

}  // namespace ggs
