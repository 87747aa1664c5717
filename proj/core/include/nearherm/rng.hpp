#pragma once

#include <cstdint>
#include <utility>

namespace nearherm {

/// splitmix64 finalizer: a full-avalanche 64-bit mixing function.
std::uint64_t mix64(std::uint64_t x);

/// Identifies one reproducible random stream: a master seed plus the index
/// of the trial that consumes the stream.  Distinct trial indices yield
/// statistically independent substreams of the same master seed.
struct SeedPlan {
  std::uint64_t master_seed = 0;
  std::uint64_t trial_index = 0;

  /// Avalanche-mixed 64-bit stream seed:
  ///   mix64(master_seed + (trial_index + 1) * 0x9E3779B97F4A7C15).
  std::uint64_t stream_seed() const;
};

/// xoshiro256++ pseudorandom generator.  State is expanded from a 64-bit
/// seed with splitmix64, following the generator authors' recommendation.
/// All distributions below are defined in terms of next_u64() only, so any
/// implementation of this sequence reproduces identical draws bit for bit.
class Xoshiro256pp {
 public:
  explicit Xoshiro256pp(std::uint64_t seed);
  explicit Xoshiro256pp(const SeedPlan& plan)
      : Xoshiro256pp(plan.stream_seed()) {}

  std::uint64_t next_u64();

  /// Uniform double in [0, 1) using the top 53 bits.
  double uniform01();

  /// Uniform double in [a, b).
  double uniform(double a, double b);

  /// Fair sign: +1 or -1 from the top bit of the next word.
  double rademacher();

  /// Standard normal via the Box-Muller transform
  ///   z0 = sqrt(-2 ln(1 - u1)) cos(2 pi u2),
  ///   z1 = sqrt(-2 ln(1 - u1)) sin(2 pi u2);
  /// z0 is returned first and z1 cached for the next call, so draws come in
  /// deterministic pairs consuming two uniforms each.
  double gaussian();

  /// Both halves of one Box-Muller pair, bypassing the cache.
  std::pair<double, double> gaussian_pair();

 private:
  std::uint64_t s_[4];
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace nearherm
