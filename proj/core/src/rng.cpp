#include "nearherm/rng.hpp"

#include <cmath>
#include <numbers>

namespace nearherm {

namespace {

inline std::uint64_t rotl(std::uint64_t x, int k) {
  return (x << k) | (x >> (64 - k));
}

constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;

}  // namespace

std::uint64_t mix64(std::uint64_t x) {
  x ^= x >> 30;
  x *= 0xBF58476D1CE4E5B9ULL;
  x ^= x >> 27;
  x *= 0x94D049BB133111EBULL;
  x ^= x >> 31;
  return x;
}

std::uint64_t SeedPlan::stream_seed() const {
  return mix64(master_seed + (trial_index + 1) * kGolden);
}

Xoshiro256pp::Xoshiro256pp(std::uint64_t seed) {
  // splitmix64 state expansion.
  std::uint64_t x = seed;
  for (auto& word : s_) {
    x += kGolden;
    word = mix64(x);
  }
}

std::uint64_t Xoshiro256pp::next_u64() {
  const std::uint64_t result = rotl(s_[0] + s_[3], 23) + s_[0];
  const std::uint64_t t = s_[1] << 17;
  s_[2] ^= s_[0];
  s_[3] ^= s_[1];
  s_[1] ^= s_[2];
  s_[0] ^= s_[3];
  s_[2] ^= t;
  s_[3] = rotl(s_[3], 45);
  return result;
}

double Xoshiro256pp::uniform01() {
  return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double Xoshiro256pp::uniform(double a, double b) {
  return a + (b - a) * uniform01();
}

double Xoshiro256pp::rademacher() {
  return (next_u64() >> 63) ? 1.0 : -1.0;
}

double Xoshiro256pp::gaussian() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  const auto [z0, z1] = gaussian_pair();
  spare_ = z1;
  has_spare_ = true;
  return z0;
}

std::pair<double, double> Xoshiro256pp::gaussian_pair() {
  const double u1 = uniform01();
  const double u2 = uniform01();
  // 1 - u1 lies in (0, 1], keeping the logarithm finite.
  const double r = std::sqrt(-2.0 * std::log(1.0 - u1));
  const double phi = 2.0 * std::numbers::pi * u2;
  return {r * std::cos(phi), r * std::sin(phi)};
}

}  // namespace nearherm
