#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include "doctest.h"
#include "nearherm/bounds.hpp"
#include "nearherm/eig.hpp"
#include "nearherm/rng.hpp"
#include "nearherm/types.hpp"

using namespace nearherm;

TEST_CASE("spectral order sorts by real part then imaginary part") {
  std::vector<cplx> v = {cplx(1.0, 0.0), cplx(2.0, -1.0), cplx(2.0, 3.0),
                         cplx(-1.0, 5.0)};
  sort_spectrum(v);
  CHECK(v[0] == cplx(2.0, 3.0));
  CHECK(v[1] == cplx(2.0, -1.0));
  CHECK(v[2] == cplx(1.0, 0.0));
  CHECK(v[3] == cplx(-1.0, 5.0));
  CHECK(spectral_less(cplx(1.0, 0.0), cplx(0.0, 0.0)));
  CHECK_FALSE(spectral_less(cplx(0.0, 0.0), cplx(0.0, 0.0)));
}

TEST_CASE("hermitian eigenvalues of a tridiagonal toeplitz matrix") {
  // Zero diagonal, unit off-diagonal: eigenvalues 2 cos(k pi / (n+1)).
  const std::size_t n = 12;
  ComplexMatrix a(n, n);
  for (std::size_t i = 0; i + 1 < n; ++i) {
    a(i, i + 1) = cplx(1.0, 0.0);
    a(i + 1, i) = cplx(1.0, 0.0);
  }
  const Spectrum s = eig_hermitian(a, true);
  REQUIRE(s.eigenvalues.size() == n);
  for (std::size_t k = 0; k < n; ++k) {
    const double expect =
        2.0 * std::cos(static_cast<double>(k + 1) * std::numbers::pi /
                       static_cast<double>(n + 1));
    CHECK(s.eigenvalues[k].real() == doctest::Approx(expect).epsilon(1e-12));
    CHECK(s.eigenvalues[k].imag() == 0.0);
  }
  CHECK(s.residual <= 1e-10);

  // Eigenvectors are orthonormal.
  REQUIRE(s.eigenvectors.has_value());
  const ComplexMatrix gram =
      s.eigenvectors->conj_transpose() * (*s.eigenvectors);
  CHECK((gram - ComplexMatrix::identity(n)).max_abs() <= 1e-10);
}

TEST_CASE("hermitian solver rejects non-hermitian input") {
  ComplexMatrix a(3, 3);
  a(0, 1) = cplx(1.0, 0.0);
  a(1, 0) = cplx(2.0, 0.0);
  CHECK_THROWS_AS(eig_hermitian(a), contract_error);
}

TEST_CASE("general solver recovers known roots from a companion matrix") {
  // Companion of (z - 1)(z - 2)(z - 3) = z^3 - 6z^2 + 11z - 6.
  ComplexMatrix c(3, 3);
  c(0, 0) = cplx(6.0, 0.0);
  c(0, 1) = cplx(-11.0, 0.0);
  c(0, 2) = cplx(6.0, 0.0);
  c(1, 0) = cplx(1.0, 0.0);
  c(2, 1) = cplx(1.0, 0.0);
  const Spectrum s = eig_general(c);
  REQUIRE(s.eigenvalues.size() == 3);
  CHECK(std::abs(s.eigenvalues[0] - cplx(3.0, 0.0)) <= 1e-10);
  CHECK(std::abs(s.eigenvalues[1] - cplx(2.0, 0.0)) <= 1e-10);
  CHECK(std::abs(s.eigenvalues[2] - cplx(1.0, 0.0)) <= 1e-10);
}

TEST_CASE("general solver matches the hermitian solver on hermitian input") {
  Xoshiro256pp rng(404);
  const std::size_t n = 20;
  ComplexMatrix a(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    a(i, i) = cplx(rng.gaussian(), 0.0);
    for (std::size_t j = i + 1; j < n; ++j) {
      const auto [re, im] = rng.gaussian_pair();
      a(i, j) = cplx(re, im);
      a(j, i) = std::conj(a(i, j));
    }
  }
  const Spectrum h = eig_hermitian(a);
  const Spectrum g = eig_general(a);
  const double scale = std::max(1.0, std::abs(h.eigenvalues.front()));
  const MatchResult match = match_spectra(h.eigenvalues, g.eigenvalues);
  double worst = 0.0;
  for (double c : match.pair_costs) worst = std::max(worst, std::sqrt(c));
  CHECK(worst <= 1e-9 * scale);
}

TEST_CASE("eigenvalue sum equals the trace for a general matrix") {
  Xoshiro256pp rng(1234);
  const std::size_t n = 15;
  ComplexMatrix a(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      const auto [re, im] = rng.gaussian_pair();
      a(i, j) = cplx(re, im);
    }
  }
  const Spectrum s = eig_general(a);
  cplx sum{0.0, 0.0};
  for (const cplx& ev : s.eigenvalues) sum += ev;
  CHECK(std::abs(sum - a.trace()) <= 1e-10 * static_cast<double>(n));
}

TEST_CASE("general solver handles complex conjugate pairs of a real matrix") {
  // Roots of z^2 - 2z + 5: 1 +- 2i.
  const ComplexMatrix a{{cplx(2.0, 0.0), cplx(-5.0, 0.0)},
                        {cplx(1.0, 0.0), cplx(0.0, 0.0)}};
  const Spectrum s = eig_general(a);
  CHECK(std::abs(s.eigenvalues[0] - cplx(1.0, 2.0)) <= 1e-12);
  CHECK(std::abs(s.eigenvalues[1] - cplx(1.0, -2.0)) <= 1e-12);
}

TEST_CASE("inverse iteration refines an eigenpair") {
  const ComplexMatrix a{{cplx(4.0, 0.0), cplx(1.0, 0.0), cplx(0.0, 0.0)},
                        {cplx(1.0, 0.0), cplx(2.0, 0.0), cplx(0.5, 0.0)},
                        {cplx(0.0, 0.0), cplx(0.5, 0.0), cplx(-1.0, 0.0)}};
  const Spectrum s = eig_hermitian(a);
  // Hand the top eigenvalue over with a sizable perturbation.
  const EigenPair pair =
      eigenvector_for(a, s.eigenvalues[0] + cplx(3e-3, 1e-3), 1e-10);
  CHECK(std::abs(pair.eigenvalue - s.eigenvalues[0]) <= 1e-8);
  CHECK(pair.residual <= 1e-9);
  CHECK(vec_norm(pair.eigenvector) == doctest::Approx(1.0).epsilon(1e-12));
  // Deterministic phase: the largest coordinate is positive real.
  std::size_t arg_max = 0;
  for (std::size_t i = 1; i < 3; ++i) {
    if (std::abs(pair.eigenvector[i]) > std::abs(pair.eigenvector[arg_max])) {
      arg_max = i;
    }
  }
  CHECK(pair.eigenvector[arg_max].imag() == doctest::Approx(0.0));
  CHECK(pair.eigenvector[arg_max].real() > 0.0);
}

TEST_CASE("identical input gives identical spectra") {
  Xoshiro256pp rng(5);
  const std::size_t n = 25;
  ComplexMatrix a(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      const auto [re, im] = rng.gaussian_pair();
      a(i, j) = cplx(re, im);
    }
  }
  const Spectrum s1 = eig_general(a);
  const Spectrum s2 = eig_general(a);
  REQUIRE(s1.eigenvalues.size() == s2.eigenvalues.size());
  for (std::size_t i = 0; i < n; ++i) {
    CHECK(s1.eigenvalues[i].real() == s2.eigenvalues[i].real());
    CHECK(s1.eigenvalues[i].imag() == s2.eigenvalues[i].imag());
  }
}
