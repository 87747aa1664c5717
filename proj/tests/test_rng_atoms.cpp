#include <cmath>
#include <cstdint>
#include <set>
#include <vector>

#include "doctest.h"
#include "nearherm/atoms.hpp"
#include "nearherm/rng.hpp"

using namespace nearherm;

TEST_CASE("mix64 avalanches and is deterministic") {
  CHECK(mix64(42) == mix64(42));
  CHECK(mix64(1) != 0);
  CHECK(mix64(1) != mix64(2));
  // Flipping one input bit flips roughly half the output bits.
  const std::uint64_t d = mix64(12345) ^ mix64(12345 ^ 1ull);
  int bits = 0;
  for (int i = 0; i < 64; ++i) bits += (d >> i) & 1u;
  CHECK(bits > 16);
  CHECK(bits < 48);
}

TEST_CASE("seed plans give distinct reproducible substreams") {
  const SeedPlan a{42, 0};
  const SeedPlan b{42, 1};
  const SeedPlan c{43, 0};
  CHECK(a.stream_seed() == SeedPlan{42, 0}.stream_seed());
  CHECK(a.stream_seed() != b.stream_seed());
  CHECK(a.stream_seed() != c.stream_seed());

  Xoshiro256pp r1(a);
  Xoshiro256pp r2(a);
  for (int i = 0; i < 100; ++i) CHECK(r1.next_u64() == r2.next_u64());
}

TEST_CASE("uniform01 stays in range and fills it") {
  Xoshiro256pp rng(9001);
  double lo = 1.0;
  double hi = 0.0;
  for (int i = 0; i < 20000; ++i) {
    const double u = rng.uniform01();
    CHECK(u >= 0.0);
    CHECK(u < 1.0);
    lo = std::min(lo, u);
    hi = std::max(hi, u);
  }
  CHECK(lo < 0.01);
  CHECK(hi > 0.99);
}

TEST_CASE("gaussian pairs have the expected moments") {
  Xoshiro256pp rng(7);
  const int count = 100000;
  double sum = 0.0;
  double sum_sq = 0.0;
  double cross = 0.0;
  for (int i = 0; i < count; ++i) {
    const auto [x, y] = rng.gaussian_pair();
    sum += x + y;
    sum_sq += x * x + y * y;
    cross += x * y;
  }
  CHECK(std::abs(sum / (2 * count)) < 0.01);
  CHECK(sum_sq / (2 * count) == doctest::Approx(1.0).epsilon(0.02));
  CHECK(std::abs(cross / count) < 0.01);
}

TEST_CASE("atom factories and moments") {
  CHECK(AtomSpec::gaussian(0.5, 2.0).mean() == 0.5);
  CHECK(AtomSpec::gaussian(0.5, 2.0).variance() == 2.0);
  CHECK(AtomSpec::rademacher().mean() == 0.0);
  CHECK(AtomSpec::rademacher().variance() == 1.0);
  const AtomSpec u = AtomSpec::uniform(-1.0, 3.0);
  CHECK(u.mean() == doctest::Approx(1.0));
  CHECK(u.variance() == doctest::Approx(16.0 / 12.0));
  const AtomSpec t = AtomSpec::two_point(0.25, 0.0, 4.0);
  CHECK(t.mean() == doctest::Approx(1.0));
  CHECK(t.variance() == doctest::Approx(3.0));
}

TEST_CASE("degeneracy and point-mass reporting") {
  CHECK_FALSE(AtomSpec::gaussian(0.0, 1.0).is_degenerate());
  CHECK(AtomSpec::gaussian(3.0, 0.0).is_degenerate());
  CHECK(AtomSpec::uniform(2.0, 2.0).is_degenerate());
  CHECK(AtomSpec::two_point(1.0, 0.0, 5.0).is_degenerate());
  CHECK(AtomSpec::two_point(0.0, 0.0, 5.0).is_degenerate());
  CHECK_FALSE(AtomSpec::two_point(0.5, -1.0, 1.0).is_degenerate());

  CHECK(AtomSpec::gaussian(0.0, 1.0).max_point_mass() == 0.0);
  CHECK(AtomSpec::rademacher().max_point_mass() == 0.5);
  CHECK(AtomSpec::two_point(0.7, 0.0, 1.0).max_point_mass() == 0.7);
  CHECK(AtomSpec::gaussian(1.0, 0.0).max_point_mass() == 1.0);
}

TEST_CASE("atom validation rejects bad parameters") {
  CHECK_THROWS_AS(AtomSpec::gaussian(0.0, -1.0).validate(), contract_error);
  CHECK_THROWS_AS(AtomSpec::uniform(2.0, 1.0).validate(), contract_error);
  CHECK_THROWS_AS(AtomSpec::two_point(1.5, 0.0, 1.0).validate(),
                  contract_error);
  CHECK_NOTHROW(AtomSpec::gaussian(0.0, 1.0).validate());
}

TEST_CASE("samples follow the declared distribution") {
  Xoshiro256pp rng(11);
  const AtomSpec r = AtomSpec::rademacher();
  std::set<double> seen;
  double mean = 0.0;
  for (int i = 0; i < 10000; ++i) {
    const double v = r.sample(rng);
    seen.insert(v);
    mean += v;
  }
  CHECK(seen == std::set<double>({-1.0, 1.0}));
  CHECK(std::abs(mean / 10000) < 0.05);

  const AtomSpec t = AtomSpec::two_point(0.25, -1.0, 2.0);
  int hi_count = 0;
  for (int i = 0; i < 20000; ++i) {
    const double v = t.sample(rng);
    CHECK((v == -1.0 || v == 2.0));
    hi_count += v == 2.0;
  }
  CHECK(hi_count / 20000.0 == doctest::Approx(0.25).epsilon(0.1));

  const AtomSpec u = AtomSpec::uniform(5.0, 6.0);
  for (int i = 0; i < 1000; ++i) {
    const double v = u.sample(rng);
    CHECK(v >= 5.0);
    CHECK(v < 6.0);
  }
}
