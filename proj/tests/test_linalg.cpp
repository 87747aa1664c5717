#include <cmath>
#include <vector>

#include "doctest.h"
#include "nearherm/linalg.hpp"
#include "nearherm/rng.hpp"
#include "nearherm/types.hpp"

using namespace nearherm;

namespace {

ComplexMatrix random_matrix(std::size_t m, std::size_t n, Xoshiro256pp& rng) {
  ComplexMatrix a(m, n);
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      const auto [re, im] = rng.gaussian_pair();
      a(i, j) = cplx(re, im);
    }
  }
  return a;
}

}  // namespace

TEST_CASE("frobenius norm of a hand matrix") {
  const ComplexMatrix a{{cplx(3.0, 4.0), cplx(0.0, 0.0)},
                        {cplx(0.0, 0.0), cplx(0.0, 2.0)}};
  CHECK(frobenius_norm(a) == doctest::Approx(std::sqrt(29.0)));
}

TEST_CASE("spectral norm matches closed forms") {
  // Diagonal: the largest magnitude wins.
  const ComplexMatrix d =
      ComplexMatrix::diagonal({cplx(0.0, -3.0), cplx(2.0, 0.0)});
  CHECK(spectral_norm(d) == doctest::Approx(3.0).epsilon(1e-12));

  // Rank-one u v^*: norm is ||u|| ||v||.
  const std::vector<cplx> u = {cplx(1.0, 0.0), cplx(0.0, 2.0)};
  const std::vector<cplx> v = {cplx(2.0, 0.0), cplx(1.0, 1.0)};
  const ComplexMatrix uv = outer(u, v);
  CHECK(spectral_norm(uv) ==
        doctest::Approx(vec_norm(u) * vec_norm(v)).epsilon(1e-12));

  // A 2x2 Hermitian matrix whose eigenvalues follow from the quadratic
  // formula; previously an iterative estimate stalled between the two
  // singular values on exactly this instance.
  const ComplexMatrix h{{cplx(-0.30297238229438861, 0.0),
                         cplx(0.034884350800300196, -0.28509361111501574)},
                        {cplx(0.034884350800300196, 0.28509361111501574),
                         cplx(-0.011509582439289763, 0.0)}};
  const double mid = 0.5 * (h(0, 0).real() + h(1, 1).real());
  const double rad =
      std::hypot(0.5 * (h(0, 0).real() - h(1, 1).real()), std::abs(h(0, 1)));
  const double exact = std::max(std::abs(mid + rad), std::abs(mid - rad));
  CHECK(spectral_norm(h) == doctest::Approx(exact).epsilon(1e-13));
}

TEST_CASE("spectral norm is sandwiched by the frobenius norm") {
  Xoshiro256pp rng(5150);
  for (int rep = 0; rep < 8; ++rep) {
    const std::size_t m = 2 + rng.next_u64() % 8;
    const std::size_t n = 2 + rng.next_u64() % 8;
    const ComplexMatrix a = random_matrix(m, n, rng);
    const double sigma = spectral_norm(a);
    const double frob = frobenius_norm(a);
    CHECK(sigma <= frob * (1.0 + 1e-12));
    CHECK(frob <=
          sigma * std::sqrt(static_cast<double>(std::min(m, n))) *
              (1.0 + 1e-12));
    // Transposition and conjugation leave the norm unchanged.
    CHECK(spectral_norm(a.conj_transpose()) ==
          doctest::Approx(sigma).epsilon(1e-10));
  }
}

TEST_CASE("re_im_parts reconstructs the matrix with hermitian pieces") {
  Xoshiro256pp rng(31);
  const ComplexMatrix a = random_matrix(4, 4, rng);
  const auto [re, im] = re_im_parts(a);
  CHECK(re.hermitian_defect() <= 1e-14);
  CHECK(im.hermitian_defect() <= 1e-14);
  const ComplexMatrix back = re + cplx(0.0, 1.0) * im;
  CHECK((back - a).max_abs() <= 1e-14);
  CHECK_THROWS_AS(re_im_parts(ComplexMatrix(2, 3)), contract_error);
}

TEST_CASE("outer product has the right entries") {
  const std::vector<cplx> u = {cplx(1.0, 1.0), cplx(2.0, 0.0)};
  const std::vector<cplx> v = {cplx(0.0, 1.0), cplx(3.0, 0.0)};
  const ComplexMatrix m = outer(u, v);
  CHECK(m.rows() == 2);
  CHECK(m.cols() == 2);
  CHECK(m(0, 1) == u[0] * std::conj(v[1]));
  CHECK(m(1, 0) == u[1] * std::conj(v[0]));
}

TEST_CASE("lu solves and flags singularity") {
  const ComplexMatrix a{{cplx(2.0, 0.0), cplx(1.0, 0.0)},
                        {cplx(1.0, 0.0), cplx(3.0, 0.0)}};
  LuFactorization lu(a);
  CHECK_FALSE(lu.singular());
  const std::vector<cplx> x = lu.solve({cplx(5.0, 0.0), cplx(10.0, 0.0)});
  CHECK(std::abs(x[0] - cplx(1.0, 0.0)) <= 1e-12);
  CHECK(std::abs(x[1] - cplx(3.0, 0.0)) <= 1e-12);
  CHECK(std::abs(lu.determinant().value - cplx(5.0, 0.0)) <= 1e-12);

  const ComplexMatrix s{{cplx(1.0, 0.0), cplx(2.0, 0.0)},
                        {cplx(2.0, 0.0), cplx(4.0, 0.0)}};
  LuFactorization lus(s);
  CHECK(lus.singular());
  CHECK_THROWS_AS(lus.solve({cplx(1.0, 0.0), cplx(0.0, 0.0)}), solver_error);
}

TEST_CASE("determinant composes log magnitude and phase") {
  Xoshiro256pp rng(77);
  const ComplexMatrix a = random_matrix(5, 5, rng);
  const auto det = determinant(a);
  const cplx rebuilt = det.phase * std::exp(det.log_abs);
  CHECK(std::abs(rebuilt - det.value) <= 1e-9 * std::abs(det.value));
}

TEST_CASE("bordered determinant identity for rank-one updates") {
  // det(M - zI + i u v^*) = det(M - zI) (1 + i v^* (M - zI)^{-1} u) at
  // points z away from the spectrum, tying the determinant, resolvent and
  // outer-product paths together.
  Xoshiro256pp rng(123);
  const std::size_t n = 6;
  ComplexMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    m(i, i) = cplx(rng.gaussian(), 0.0);
    for (std::size_t j = i + 1; j < n; ++j) {
      const auto [re, im] = rng.gaussian_pair();
      m(i, j) = cplx(re, im);
      m(j, i) = std::conj(m(i, j));
    }
  }
  std::vector<cplx> u(n);
  std::vector<cplx> v(n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto [a1, b1] = rng.gaussian_pair();
    const auto [a2, b2] = rng.gaussian_pair();
    u[i] = cplx(a1, b1);
    v[i] = cplx(a2, b2);
  }
  const ComplexMatrix iuv = cplx(0.0, 1.0) * outer(u, v);
  for (int rep = 0; rep < 20; ++rep) {
    const cplx z(rng.uniform(-8.0, 8.0), rng.uniform(1.0, 3.0));
    ComplexMatrix shifted = m;
    for (std::size_t i = 0; i < n; ++i) shifted(i, i) -= z;
    const cplx lhs = determinant(shifted + iuv).value;
    const cplx rhs = determinant(shifted).value *
                     (cplx(1.0, 0.0) +
                      cplx(0.0, 1.0) * resolvent_form(m, z, v, u));
    CHECK(std::abs(lhs - rhs) <= 1e-8 * (1.0 + std::abs(lhs)));
  }
}

TEST_CASE("sylvester determinant identity") {
  Xoshiro256pp rng(99);
  const ComplexMatrix a = random_matrix(5, 2, rng);
  const ComplexMatrix b = random_matrix(2, 5, rng);
  const SylvesterCheck check = sylvester_det_check(a, b);
  CHECK(check.rel_err <= 1e-10);
  CHECK(std::abs(check.lhs - check.rhs) <=
        1e-10 * (1.0 + std::abs(check.lhs)));
}

TEST_CASE("orthonormalize_columns produces a unitary basis") {
  Xoshiro256pp rng(2024);
  ComplexMatrix a = random_matrix(6, 6, rng);
  orthonormalize_columns(a);
  const ComplexMatrix gram = a.conj_transpose() * a;
  CHECK((gram - ComplexMatrix::identity(6)).max_abs() <= 1e-12);

  ComplexMatrix dependent(3, 2);
  dependent(0, 0) = cplx(1.0, 0.0);
  dependent(1, 0) = cplx(2.0, 0.0);
  dependent(0, 1) = cplx(2.0, 0.0);
  dependent(1, 1) = cplx(4.0, 0.0);
  CHECK_THROWS_AS(orthonormalize_columns(dependent), contract_error);
}
