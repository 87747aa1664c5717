#include <cmath>
#include <numbers>
#include <vector>

#include "doctest.h"
#include "nearherm/laws.hpp"

using namespace nearherm;

namespace {
constexpr double kPi = std::numbers::pi;
}

TEST_CASE("semicircle density values and support") {
  CHECK(semicircle_density(0.0) == doctest::Approx(1.0 / kPi).epsilon(1e-14));
  CHECK(semicircle_density(2.0) == 0.0);
  CHECK(semicircle_density(-2.5) == 0.0);
  CHECK(semicircle_density(1.0) ==
        doctest::Approx(std::sqrt(3.0) / (2.0 * kPi)).epsilon(1e-14));
  // Total mass one via the library quadrature.
  const cplx total = integrate_semicircle([](double) { return cplx(1.0, 0.0); });
  CHECK(total.real() == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(total.imag() == doctest::Approx(0.0));
}

TEST_CASE("semicircle cdf endpoints, symmetry, and density consistency") {
  CHECK(semicircle_cdf(-2.1) == 0.0);
  CHECK(semicircle_cdf(2.1) == 1.0);
  CHECK(semicircle_cdf(0.0) == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(semicircle_cdf(1.0) + semicircle_cdf(-1.0) ==
        doctest::Approx(1.0).epsilon(1e-13));
  // d/dx CDF = density (central difference).
  for (double x : {-1.5, -0.5, 0.3, 1.7}) {
    const double h = 1e-6;
    const double numeric =
        (semicircle_cdf(x + h) - semicircle_cdf(x - h)) / (2.0 * h);
    CHECK(numeric == doctest::Approx(semicircle_density(x)).epsilon(1e-6));
  }
}

TEST_CASE("marchenko-pastur density: square case values") {
  // y = 1 support [0, 4]; at x = 2 the density is 1/(2 pi).
  CHECK(mp_density(2.0, 1.0) ==
        doctest::Approx(1.0 / (2.0 * kPi)).epsilon(1e-14));
  CHECK(mp_density(-0.1, 1.0) == 0.0);
  CHECK(mp_density(4.1, 1.0) == 0.0);
  const cplx total = integrate_mp([](double) { return cplx(1.0, 0.0); });
  CHECK(total.real() == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("marchenko-pastur density: rectangular case mass") {
  // y = 1/2: continuous mass is y, the rest sits in the atom at zero.
  const double y = 0.5;
  const double lo = std::sqrt(y) * std::pow(1.0 - 1.0 / std::sqrt(y), 2.0);
  const double hi = std::sqrt(y) * std::pow(1.0 + 1.0 / std::sqrt(y), 2.0);
  CHECK(mp_density(0.99 * lo, y) == 0.0);
  CHECK(mp_density(1.01 * hi, y) == 0.0);
  // Simpson on a fine grid over the support.
  const int steps = 20000;
  double mass = 0.0;
  for (int i = 0; i < steps; ++i) {
    const double a = lo + (hi - lo) * i / steps;
    const double b = lo + (hi - lo) * (i + 1) / steps;
    mass += (mp_density(a, y) + 4.0 * mp_density(0.5 * (a + b), y) +
             mp_density(b, y)) *
            (b - a) / 6.0;
  }
  CHECK(mass == doctest::Approx(y).epsilon(1e-6));
}

TEST_CASE("mp cdf agrees with quadrature of the density") {
  for (double x : {0.5, 1.0, 2.0, 3.0, 3.9}) {
    const cplx integral = adaptive_simpson(
        [](double t) { return cplx(mp_density(t, 1.0), 0.0); }, 1e-12, x,
        1e-12);
    CHECK(mp_cdf(x) == doctest::Approx(integral.real()).epsilon(1e-5));
  }
  CHECK(mp_cdf(0.0) == 0.0);
  CHECK(mp_cdf(4.0) == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("segment distance covers all regimes") {
  CHECK(segment_distance(cplx(1.0, 0.0), -2.0, 2.0) == 0.0);
  CHECK(segment_distance(cplx(3.0, 0.0), -2.0, 2.0) == doctest::Approx(1.0));
  CHECK(segment_distance(cplx(0.0, 0.7), -2.0, 2.0) == doctest::Approx(0.7));
  CHECK(segment_distance(cplx(-3.0, 4.0), -2.0, 2.0) ==
        doctest::Approx(std::hypot(1.0, 4.0)));
}

TEST_CASE("stieltjes transform of the semicircle law at frozen points") {
  // Real point outside the support: m(2.5) = -0.5.
  const cplx at_real = m_sc(cplx(2.5, 0.0));
  CHECK(at_real.real() == doctest::Approx(-0.5).epsilon(1e-12));
  CHECK(std::abs(at_real.imag()) <= 1e-12);
  // Imaginary point: m(i) = i (sqrt(5) - 1) / 2.
  const cplx at_i = m_sc(cplx(0.0, 1.0));
  CHECK(std::abs(at_i - cplx(0.0, (std::sqrt(5.0) - 1.0) / 2.0)) <= 1e-12);
  // Defining equation and branch bound on a ring of points.
  for (int k = 0; k < 12; ++k) {
    const double phi = 2.0 * kPi * k / 12.0;
    const cplx z = cplx(2.6 * std::cos(phi), 2.6 * std::sin(phi));
    const cplx m = m_sc(z);
    CHECK(std::abs(m * m + z * m + cplx(1.0, 0.0)) <= 1e-12);
    CHECK(std::abs(m) <= 1.0 + 1e-12);
  }
  CHECK_THROWS_AS(m_sc(cplx(1.0, 0.0)), contract_error);
}

TEST_CASE("stieltjes transform of the square mp law at frozen points") {
  // m(6.25) = -0.2 solves z m^2 + z m + 1 = 0.
  const cplx at_real = m_mp(cplx(6.25, 0.0));
  CHECK(at_real.real() == doctest::Approx(-0.2).epsilon(1e-12));
  CHECK(std::abs(at_real.imag()) <= 1e-12);
  // m(-1) = (sqrt(5) - 1) / 2 (positive: mass sits to the right of -1).
  const cplx at_neg = m_mp(cplx(-1.0, 0.0));
  CHECK(at_neg.real() ==
        doctest::Approx((std::sqrt(5.0) - 1.0) / 2.0).epsilon(1e-12));
  for (int k = 0; k < 12; ++k) {
    const double phi = 2.0 * kPi * k / 12.0;
    const cplx z = cplx(2.0, 0.0) + cplx(2.7 * std::cos(phi), 2.7 * std::sin(phi));
    const cplx m = m_mp(z);
    CHECK(std::abs(z * m * m + z * m + cplx(1.0, 0.0)) <= 1e-12);
    CHECK(std::abs(cplx(1.0, 0.0) + z * m) <= 1.0 + 1e-12);
  }
  CHECK_THROWS_AS(m_mp(cplx(0.0, 0.0)), contract_error);
}

TEST_CASE("outlier prediction maps") {
  // Additive spike 2 -> 2.5; multiplicative spike 2 -> 4.5.
  const auto w = outlier_wigner(cplx(2.0, 0.0));
  REQUIRE(w.has_value());
  CHECK(std::abs(w->value - cplx(2.5, 0.0)) <= 1e-14);
  const auto m = outlier_mp(cplx(2.0, 0.0));
  REQUIRE(m.has_value());
  CHECK(std::abs(m->value - cplx(4.5, 0.0)) <= 1e-14);
  // A spike strictly inside the unit disk predicts nothing.
  CHECK_FALSE(outlier_wigner(cplx(0.5, 0.0)).has_value());
  CHECK_FALSE(outlier_mp(cplx(0.0, 0.9)).has_value());
  // The multiplicative map is the additive one shifted by two.
  for (int k = 0; k < 10; ++k) {
    const double phi = 2.0 * kPi * k / 10.0;
    const cplx lambda = cplx(1.3 * std::cos(phi), 1.3 * std::sin(phi));
    const auto a = outlier_wigner(lambda);
    const auto b = outlier_mp(lambda);
    REQUIRE(a.has_value());
    REQUIRE(b.has_value());
    CHECK(std::abs(b->value - (a->value + cplx(2.0, 0.0))) <= 1e-12);
  }
  // The negative real spike of the covariance figure: -3/2 -> -1/6.
  const auto neg = outlier_mp(cplx(-1.5, 0.0));
  REQUIRE(neg.has_value());
  CHECK(std::abs(neg->value - cplx(-1.0 / 6.0, 0.0)) <= 1e-14);
}

TEST_CASE("delta prime separation margin") {
  CHECK(delta_prime(0.4) == doctest::Approx(0.16 / 2.8).epsilon(1e-14));
  CHECK(delta_prime(1.0) == doctest::Approx(0.25).epsilon(1e-14));
}

TEST_CASE("classification regions") {
  const Region sc = Region::semicircle_nbhd(0.1);
  CHECK(region_contains(sc, cplx(0.0, 0.05)));
  CHECK(region_contains(sc, cplx(2.05, 0.0)));
  CHECK_FALSE(region_contains(sc, cplx(2.2, 0.0)));
  CHECK_FALSE(region_contains(sc, cplx(0.0, 0.2)));

  const Region mp = Region::mp_nbhd(0.1);
  CHECK(region_contains(mp, cplx(4.05, 0.0)));
  CHECK_FALSE(region_contains(mp, cplx(-0.2, 0.0)));

  const Region half = Region::half_plane(+1);
  CHECK(region_contains(half, cplx(-5.0, 1e-9)));
  CHECK_FALSE(region_contains(half, cplx(-5.0, -1e-9)));

  const Region disk = Region::disk(0.5);
  CHECK(region_contains(disk, cplx(0.3, 0.3)));
  CHECK_FALSE(region_contains(disk, cplx(0.5, 0.2)));

  const Region ell = Region::ellipse(1.5);
  CHECK(region_contains(ell, cplx(0.0, 0.0)));
  CHECK_FALSE(region_contains(ell, cplx(2.5, 0.0)));
  CHECK_THROWS_AS(Region::ellipse(0.9), config_error);
}

TEST_CASE("overlap limits: frozen value and quadrature consistency") {
  const Prediction w = overlap_wigner(cplx(2.0, 0.0));
  CHECK(w.value.real() == doctest::Approx(0.75).epsilon(1e-9));
  CHECK(std::abs(w.value.imag()) <= 1e-12);
  // theta -> 1+ sends the overlap to zero; theta -> infinity to one.
  CHECK(overlap_wigner(cplx(1.05, 0.0)).value.real() < 0.2);
  CHECK(overlap_wigner(cplx(50.0, 0.0)).value.real() > 0.99);
  CHECK_THROWS_AS(overlap_wigner(cplx(0.5, 0.0)), contract_error);

  const Prediction m = overlap_mp(cplx(2.0, 0.0));
  CHECK(m.value.real() > 0.0);
  CHECK(m.value.real() <= 1.0 + 1e-12);
  CHECK_THROWS_AS(overlap_mp(cplx(-0.5, 0.0)), contract_error);
}

TEST_CASE("adaptive simpson integrates a sharp feature") {
  const cplx integral = adaptive_simpson(
      [](double x) { return cplx(1.0 / (1e-4 + x * x), 0.0); }, -1.0, 1.0,
      1e-10);
  // Closed form: 2 atan(100) / 0.01.
  const double expect = 2.0 * std::atan(100.0) / 0.01;
  CHECK(integral.real() == doctest::Approx(expect).epsilon(1e-8));
}
