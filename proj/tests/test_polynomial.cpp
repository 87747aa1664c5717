#include <algorithm>
#include <cmath>
#include <vector>

#include "doctest.h"
#include "nearherm/bounds.hpp"
#include "nearherm/eig.hpp"
#include "nearherm/polynomial.hpp"
#include "nearherm/rng.hpp"

using namespace nearherm;

TEST_CASE("polynomial evaluation, degree and derivative") {
  // 2 - 3z + z^2.
  const Polynomial p{{cplx(2.0, 0.0), cplx(-3.0, 0.0), cplx(1.0, 0.0)}};
  CHECK(p.degree() == 2);
  CHECK(p.eval(cplx(0.0, 0.0)) == cplx(2.0, 0.0));
  CHECK(p.eval(cplx(1.0, 0.0)) == cplx(0.0, 0.0));
  CHECK(p.eval(cplx(2.0, 0.0)) == cplx(0.0, 0.0));
  const Polynomial d = p.derivative();
  CHECK(d.degree() == 1);
  CHECK(d.eval(cplx(0.0, 0.0)) == cplx(-3.0, 0.0));
  CHECK(d.eval(cplx(1.5, 0.0)) == cplx(0.0, 0.0));
}

TEST_CASE("from_roots builds the monic expansion") {
  const Polynomial p = Polynomial::from_roots(
      {cplx(1.0, 0.0), cplx(2.0, 0.0), cplx(3.0, 0.0)});
  // z^3 - 6 z^2 + 11 z - 6.
  REQUIRE(p.coeffs.size() == 4);
  CHECK(std::abs(p.coeffs[0] - cplx(-6.0, 0.0)) <= 1e-14);
  CHECK(std::abs(p.coeffs[1] - cplx(11.0, 0.0)) <= 1e-14);
  CHECK(std::abs(p.coeffs[2] - cplx(-6.0, 0.0)) <= 1e-14);
  CHECK(std::abs(p.coeffs[3] - cplx(1.0, 0.0)) <= 1e-14);
}

TEST_CASE("poly_roots recovers prescribed roots") {
  const std::vector<cplx> roots = {cplx(2.0, 1.0), cplx(-1.0, 0.5),
                                   cplx(0.0, -2.0), cplx(3.0, 0.0)};
  std::vector<cplx> got = poly_roots(Polynomial::from_roots(roots));
  REQUIRE(got.size() == roots.size());
  const MatchResult match = match_spectra(got, roots);
  for (double c : match.pair_costs) CHECK(std::sqrt(c) <= 1e-9);
}

TEST_CASE("critical points of a cubic match the closed form") {
  // Roots {1, 2, 3}: derivative 3z^2 - 12z + 11 vanishes at 2 +- 1/sqrt(3).
  const std::vector<cplx> cps =
      critical_points({cplx(1.0, 0.0), cplx(2.0, 0.0), cplx(3.0, 0.0)});
  REQUIRE(cps.size() == 2);
  const double offset = 1.0 / std::sqrt(3.0);
  CHECK(std::abs(cps[0] - cplx(2.0 + offset, 0.0)) <= 1e-10);
  CHECK(std::abs(cps[1] - cplx(2.0 - offset, 0.0)) <= 1e-10);
}

TEST_CASE("critical companion spectrum is the derivative roots plus zero") {
  Xoshiro256pp rng(909);
  for (int rep = 0; rep < 5; ++rep) {
    const std::size_t n = 3 + rng.next_u64() % 6;
    std::vector<cplx> roots(n);
    for (cplx& r : roots) {
      const auto [re, im] = rng.gaussian_pair();
      r = cplx(2.0 * re, 2.0 * im);
    }
    // Independent oracle: roots of the expanded derivative.
    std::vector<cplx> expect =
        poly_roots(Polynomial::from_roots(roots).derivative());
    expect.push_back(cplx(0.0, 0.0));
    std::vector<cplx> got = eig_general(critical_companion(roots)).eigenvalues;
    REQUIRE(got.size() == expect.size());
    const MatchResult match = match_spectra(got, expect);
    for (double c : match.pair_costs) CHECK(std::sqrt(c) <= 1e-7);
  }
}

TEST_CASE("combine_imag produces p + i q") {
  const Polynomial p{{cplx(1.0, 0.0), cplx(2.0, 0.0)}};
  const Polynomial q{{cplx(3.0, 0.0)}};
  const Polynomial c = Polynomial::combine_imag(p, q);
  CHECK(c.eval(cplx(0.0, 0.0)) == cplx(1.0, 3.0));
  CHECK(c.eval(cplx(1.0, 0.0)) == cplx(3.0, 3.0));
}

TEST_CASE("strict interlacing detection") {
  CHECK(strictly_interlaces({3.0, 1.0}, {2.0}));
  CHECK(strictly_interlaces({5.0, 3.0, 1.0}, {4.0, 2.0}));
  CHECK_FALSE(strictly_interlaces({5.0, 3.0, 1.0}, {4.0, 3.0}));
  CHECK_FALSE(strictly_interlaces({5.0, 3.0, 1.0}, {6.0, 2.0}));
  // Unsorted input is sorted internally.
  CHECK(strictly_interlaces({1.0, 5.0, 3.0}, {2.0, 4.0}));
}

TEST_CASE("half-plane membership honors the margin") {
  const std::vector<cplx> upper = {cplx(1.0, 0.5), cplx(-2.0, 0.1)};
  const std::vector<cplx> lower = {cplx(0.0, -0.2), cplx(1.0, -3.0)};
  const std::vector<cplx> mixed = {cplx(0.0, 0.2), cplx(1.0, -3.0)};
  CHECK(roots_in_one_half_plane(upper));
  CHECK(roots_in_one_half_plane(lower));
  CHECK_FALSE(roots_in_one_half_plane(mixed));
  CHECK_FALSE(roots_in_one_half_plane(upper, 0.2));
  CHECK(roots_in_one_half_plane(upper, 0.05));
}

TEST_CASE("interlacing real root sets puts combined roots in one half-plane") {
  // The combination p + i q for strictly interlacing real root sets has all
  // roots strictly on one side of the real axis; breaking the interlacing
  // breaks the property.
  const std::vector<cplx> outer = {cplx(3.0, 0.0), cplx(1.0, 0.0),
                                   cplx(-1.0, 0.0)};
  const std::vector<cplx> inner = {cplx(2.0, 0.0), cplx(0.0, 0.0)};
  const Polynomial combined = Polynomial::combine_imag(
      Polynomial::from_roots(outer), Polynomial::from_roots(inner));
  CHECK(roots_in_one_half_plane(poly_roots(combined), 1e-9));

  const std::vector<cplx> broken = {cplx(4.0, 0.0), cplx(3.5, 0.0)};
  const Polynomial not_interlacing = Polynomial::combine_imag(
      Polynomial::from_roots(outer), Polynomial::from_roots(broken));
  CHECK_FALSE(roots_in_one_half_plane(poly_roots(not_interlacing), 1e-9));
}
