#include <cmath>
#include <cstddef>

#include "doctest.h"
#include "nearherm/eig.hpp"
#include "nearherm/ensembles.hpp"
#include "nearherm/linalg.hpp"

using namespace nearherm;

namespace {

Xoshiro256pp make_rng(std::uint64_t master, std::uint64_t trial) {
  return Xoshiro256pp(SeedPlan{master, trial});
}

}  // namespace

TEST_CASE("wigner samples are symmetric with exactly real entries") {
  auto rng = make_rng(7, 0);
  const EnsembleSpec spec = EnsembleSpec::goe(25);
  const ComplexMatrix w = sample_wigner(spec, rng);
  REQUIRE(w.rows() == 25);
  REQUIRE(w.cols() == 25);
  for (std::size_t i = 0; i < 25; ++i) {
    for (std::size_t j = 0; j < 25; ++j) {
      CHECK(w(i, j).imag() == 0.0);
      CHECK(w(i, j).real() == w(j, i).real());
    }
  }
  CHECK(hermitian_defect(w) == 0.0);
}

TEST_CASE("goe entry statistics match the declared atoms") {
  // Pool entries over many draws: off-diagonal variance 1, diagonal 2.
  double off_sum = 0.0, off_sq = 0.0, diag_sum = 0.0, diag_sq = 0.0;
  std::size_t off_n = 0, diag_n = 0;
  for (std::uint64_t t = 0; t < 40; ++t) {
    auto rng = make_rng(11, t);
    const ComplexMatrix w = sample_wigner(EnsembleSpec::goe(30), rng);
    for (std::size_t i = 0; i < 30; ++i) {
      for (std::size_t j = i; j < 30; ++j) {
        const double x = w(i, j).real();
        if (i == j) {
          diag_sum += x;
          diag_sq += x * x;
          ++diag_n;
        } else {
          off_sum += x;
          off_sq += x * x;
          ++off_n;
        }
      }
    }
  }
  const double off_mean = off_sum / off_n;
  const double diag_mean = diag_sum / diag_n;
  CHECK(std::abs(off_mean) < 0.02);
  CHECK(off_sq / off_n - off_mean * off_mean ==
        doctest::Approx(1.0).epsilon(0.03));
  CHECK(std::abs(diag_mean) < 0.15);
  CHECK(diag_sq / diag_n - diag_mean * diag_mean ==
        doctest::Approx(2.0).epsilon(0.15));
}

TEST_CASE("normalization rescales the same draw") {
  // Same substream, different scaling: entries relate by exactly 1/sqrt(n).
  const std::size_t n = 16;
  auto rng_raw = make_rng(5, 3);
  auto rng_scaled = make_rng(5, 3);
  const ComplexMatrix raw = sample_wigner(EnsembleSpec::goe(n), rng_raw);
  const ComplexMatrix scaled =
      sample_wigner(EnsembleSpec::goe_normalized(n), rng_scaled);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      CHECK(scaled(i, j).real() ==
            doctest::Approx(raw(i, j).real() / std::sqrt(double(n)))
                .epsilon(1e-15));
    }
  }
}

TEST_CASE("normalized goe spectrum concentrates near [-2, 2]") {
  auto rng = make_rng(21, 0);
  const Spectrum s =
      eig_hermitian(sample_wigner(EnsembleSpec::goe_normalized(200), rng));
  double lo = 1e300, hi = -1e300;
  for (const cplx& ev : s.eigenvalues) {
    lo = std::min(lo, ev.real());
    hi = std::max(hi, ev.real());
  }
  CHECK(lo > -2.6);
  CHECK(hi < 2.6);
  CHECK(hi > 1.5);   // the edge is nearly saturated already at n=200
  CHECK(lo < -1.5);
}

TEST_CASE("sample covariance is psd with rank min(m, n)") {
  auto rng = make_rng(13, 2);
  const EnsembleSpec spec = EnsembleSpec::sample_covariance(6, 15);
  const ComplexMatrix s = sample_covariance(spec, rng);
  REQUIRE(s.rows() == 15);
  REQUIRE(s.cols() == 15);
  CHECK(hermitian_defect(s) == 0.0);
  const Spectrum spectrum = eig_hermitian(s);
  std::size_t positive = 0, near_zero = 0;
  const double scale = spectral_norm(s);
  for (const cplx& ev : spectrum.eigenvalues) {
    CHECK(ev.real() >= -1e-10 * scale);
    if (ev.real() > 1e-8 * scale) {
      ++positive;
    } else {
      ++near_zero;
    }
  }
  CHECK(positive == 6);
  CHECK(near_zero == 9);
}

TEST_CASE("square covariance with 1/n scaling fills [0, 4]") {
  auto rng = make_rng(17, 1);
  const EnsembleSpec spec = EnsembleSpec::sample_covariance(
      150, 150, AtomSpec::gaussian(0.0, 1.0), Normalization::one_over_n);
  const Spectrum s = eig_hermitian(sample_covariance(spec, rng));
  double hi = 0.0;
  for (const cplx& ev : s.eigenvalues) {
    CHECK(ev.real() >= -1e-12);
    hi = std::max(hi, ev.real());
  }
  CHECK(hi > 3.0);
  CHECK(hi < 5.0);
}

TEST_CASE("moment and degeneracy gates") {
  CHECK(EnsembleSpec::goe(10).has_standard_moments());
  CHECK(EnsembleSpec::goe(10).is_nondegenerate());

  EnsembleSpec shifted = EnsembleSpec::wigner(
      10, AtomSpec::gaussian(1.0, 1.0), AtomSpec::gaussian(0.0, 1.0));
  CHECK_FALSE(shifted.has_standard_moments());

  EnsembleSpec wide = EnsembleSpec::wigner(
      10, AtomSpec::gaussian(0.0, 4.0), AtomSpec::gaussian(0.0, 1.0));
  CHECK_FALSE(wide.has_standard_moments());

  // Rademacher entries have mean zero and unit variance.
  EnsembleSpec rad = EnsembleSpec::wigner(
      10, AtomSpec::two_point(0.5, -1.0, 1.0), AtomSpec::gaussian(0.0, 1.0));
  CHECK(rad.has_standard_moments());
  CHECK(rad.is_nondegenerate());

  // A frozen diagonal atom is allowed but flags the spec as degenerate.
  EnsembleSpec frozen = EnsembleSpec::wigner(
      10, AtomSpec::gaussian(0.0, 1.0), AtomSpec::two_point(1.0, 0.0, 5.0));
  CHECK_FALSE(frozen.is_nondegenerate());
}

TEST_CASE("validate rejects inconsistent specs") {
  EnsembleSpec no_dim = EnsembleSpec::goe(10);
  no_dim.n = 0;
  CHECK_THROWS_AS(no_dim.validate(), contract_error);

  // Off-diagonal atoms need positive variance once there are off-diagonal
  // entries to fill.
  CHECK_THROWS_AS(EnsembleSpec::wigner(10, AtomSpec::two_point(1.0, -1.0, 1.0),
                                       AtomSpec::gaussian(0.0, 1.0)),
                  contract_error);
  CHECK_NOTHROW(EnsembleSpec::wigner(1, AtomSpec::two_point(1.0, -1.0, 1.0),
                                     AtomSpec::gaussian(0.0, 1.0)));

  CHECK_THROWS_AS(EnsembleSpec::sample_covariance(0, 10), contract_error);
  CHECK_THROWS_AS(
      EnsembleSpec::sample_covariance(5, 10, AtomSpec::uniform(2.0, 2.0)),
      contract_error);

  CHECK_NOTHROW(EnsembleSpec::goe(10).validate());
  CHECK_NOTHROW(EnsembleSpec::sample_covariance(5, 10).validate());
}

TEST_CASE("family dispatch matches the direct samplers") {
  auto rng_a = make_rng(3, 9);
  auto rng_b = make_rng(3, 9);
  const EnsembleSpec wig = EnsembleSpec::goe(12);
  const ComplexMatrix via_dispatch = sample_matrix(wig, rng_a);
  const ComplexMatrix direct = sample_wigner(wig, rng_b);
  CHECK(frobenius_norm(via_dispatch - direct) == 0.0);

  CHECK_THROWS_AS(
      sample_covariance(EnsembleSpec::goe(12), rng_a), contract_error);
  auto rng_c = make_rng(3, 10);
  CHECK_THROWS_AS(
      sample_wigner(EnsembleSpec::sample_covariance(4, 12), rng_c),
      contract_error);
}

TEST_CASE("unit sphere samples") {
  auto rng = make_rng(29, 0);
  const auto real_vec = sample_unit_sphere(40, Field::real, rng);
  REQUIRE(real_vec.size() == 40);
  double norm_sq = 0.0;
  for (const cplx& x : real_vec) {
    CHECK(x.imag() == 0.0);
    norm_sq += std::norm(x);
  }
  CHECK(norm_sq == doctest::Approx(1.0).epsilon(1e-12));

  const auto cplx_vec = sample_unit_sphere(40, Field::complex_field, rng);
  norm_sq = 0.0;
  bool any_imag = false;
  for (const cplx& x : cplx_vec) {
    any_imag = any_imag || x.imag() != 0.0;
    norm_sq += std::norm(x);
  }
  CHECK(norm_sq == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(any_imag);
}
