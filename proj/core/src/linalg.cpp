#include "nearherm/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "nearherm/eig.hpp"

namespace nearherm {

double frobenius_norm(const ComplexMatrix& a) {
  double acc = 0.0;
  const cplx* p = a.data();
  const std::size_t count = a.rows() * a.cols();
  for (std::size_t k = 0; k < count; ++k) acc += std::norm(p[k]);
  return std::sqrt(acc);
}

double spectral_norm(const ComplexMatrix& a) {
  // sigma_1(A)^2 is the top eigenvalue of the Hermitian PSD Gram matrix
  // A^* A.  Solving that eigenproblem directly is deterministic and cannot
  // stall below sigma_1 the way an iterative estimate can when its start
  // vector is nearly orthogonal to the top singular subspace; squaring only
  // blurs the small singular values, not the largest one.
  if (a.rows() == 0 || a.cols() == 0) return 0.0;
  if (a.rows() < a.cols()) return spectral_norm(a.conj_transpose());
  const std::size_t m = a.rows();
  const std::size_t n = a.cols();
  ComplexMatrix gram(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i; j < n; ++j) {
      cplx acc{0.0, 0.0};
      for (std::size_t k = 0; k < m; ++k) {
        acc += std::conj(a(k, i)) * a(k, j);
      }
      gram(i, j) = acc;
      gram(j, i) = std::conj(acc);
    }
    gram(i, i) = cplx(gram(i, i).real(), 0.0);
  }
  const Spectrum spectrum = eig_hermitian(gram);
  double top = 0.0;
  for (const cplx& ev : spectrum.eigenvalues) {
    top = std::max(top, ev.real());
  }
  return std::sqrt(top);
}

std::pair<ComplexMatrix, ComplexMatrix> re_im_parts(const ComplexMatrix& a) {
  if (!a.is_square()) {
    throw contract_error("re_im_parts: matrix must be square");
  }
  const std::size_t n = a.rows();
  ComplexMatrix re(n, n);
  ComplexMatrix im(n, n);
  const cplx half{0.5, 0.0};
  const cplx half_over_i{0.0, -0.5};  // 1/(2i)
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      const cplx aij = a(i, j);
      const cplx aji_c = std::conj(a(j, i));
      re(i, j) = half * (aij + aji_c);
      im(i, j) = half_over_i * (aij - aji_c);
    }
  }
  return {std::move(re), std::move(im)};
}

ComplexMatrix outer(const std::vector<cplx>& u, const std::vector<cplx>& v) {
  ComplexMatrix out(u.size(), v.size());
  for (std::size_t i = 0; i < u.size(); ++i) {
    cplx* row = out.row(i);
    for (std::size_t j = 0; j < v.size(); ++j) {
      row[j] = u[i] * std::conj(v[j]);
    }
  }
  return out;
}

LuFactorization::LuFactorization(ComplexMatrix a) : lu_(std::move(a)) {
  if (!lu_.is_square()) {
    throw contract_error("LuFactorization: matrix must be square");
  }
  const std::size_t n = lu_.rows();
  perm_.resize(n);
  for (std::size_t i = 0; i < n; ++i) perm_[i] = i;

  min_pivot_ = std::numeric_limits<double>::infinity();
  max_pivot_ = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t pivot = k;
    double best = std::abs(lu_(k, k));
    for (std::size_t i = k + 1; i < n; ++i) {
      const double cand = std::abs(lu_(i, k));
      if (cand > best) {
        best = cand;
        pivot = i;
      }
    }
    if (pivot != k) {
      for (std::size_t j = 0; j < n; ++j) std::swap(lu_(k, j), lu_(pivot, j));
      std::swap(perm_[k], perm_[pivot]);
      swap_parity_ = -swap_parity_;
    }
    const cplx ukk = lu_(k, k);
    const double mag = std::abs(ukk);
    min_pivot_ = std::min(min_pivot_, mag);
    max_pivot_ = std::max(max_pivot_, mag);
    if (mag == 0.0) {
      singular_ = true;
      continue;
    }
    for (std::size_t i = k + 1; i < n; ++i) {
      const cplx lik = lu_(i, k) / ukk;
      lu_(i, k) = lik;
      if (lik == cplx{0.0, 0.0}) continue;
      const cplx* row_k = lu_.row(k);
      cplx* row_i = lu_.row(i);
      for (std::size_t j = k + 1; j < n; ++j) row_i[j] -= lik * row_k[j];
    }
  }
}

double LuFactorization::pivot_ratio() const {
  if (min_pivot_ == 0.0) return std::numeric_limits<double>::infinity();
  return max_pivot_ / min_pivot_;
}

std::vector<cplx> LuFactorization::solve(std::vector<cplx> b) const {
  const std::size_t n = dim();
  if (b.size() != n) {
    throw contract_error("LuFactorization::solve: length mismatch");
  }
  if (singular_) {
    throw solver_error("LuFactorization::solve: matrix is singular");
  }
  std::vector<cplx> x(n);
  for (std::size_t i = 0; i < n; ++i) x[i] = b[perm_[i]];
  // Forward substitution with unit lower factor.
  for (std::size_t i = 1; i < n; ++i) {
    const cplx* row = lu_.row(i);
    cplx acc = x[i];
    for (std::size_t j = 0; j < i; ++j) acc -= row[j] * x[j];
    x[i] = acc;
  }
  // Back substitution.
  for (std::size_t ii = n; ii-- > 0;) {
    const cplx* row = lu_.row(ii);
    cplx acc = x[ii];
    for (std::size_t j = ii + 1; j < n; ++j) acc -= row[j] * x[j];
    x[ii] = acc / row[ii];
  }
  return x;
}

LuFactorization::Determinant LuFactorization::determinant() const {
  const std::size_t n = dim();
  Determinant det;
  det.phase = cplx{static_cast<double>(swap_parity_), 0.0};
  det.log_abs = 0.0;
  cplx value{static_cast<double>(swap_parity_), 0.0};
  for (std::size_t i = 0; i < n; ++i) {
    const cplx u = lu_(i, i);
    value *= u;
    const double mag = std::abs(u);
    if (mag == 0.0) {
      det.phase = cplx{0.0, 0.0};
      det.log_abs = -std::numeric_limits<double>::infinity();
      det.value = cplx{0.0, 0.0};
      return det;
    }
    det.log_abs += std::log(mag);
    det.phase *= u / mag;
  }
  det.value = value;
  return det;
}

LuFactorization::Determinant determinant(const ComplexMatrix& a) {
  return LuFactorization(a).determinant();
}

namespace {

ComplexMatrix shifted(const ComplexMatrix& a, cplx z) {
  if (!a.is_square()) {
    throw contract_error("resolvent: matrix must be square");
  }
  ComplexMatrix s = a;
  for (std::size_t i = 0; i < a.rows(); ++i) s(i, i) -= z;
  return s;
}

}  // namespace

cplx resolvent_form(const ComplexMatrix& a, cplx z, const std::vector<cplx>& u,
                    const std::vector<cplx>& v) {
  if (u.size() != a.rows() || v.size() != a.rows()) {
    throw contract_error("resolvent_form: vector length mismatch");
  }
  const LuFactorization lu(shifted(a, z));
  // A collapsed pivot means the shift sits numerically on the spectrum.
  if (lu.singular() || lu.min_pivot() <= 1e-12 * std::max(1.0, lu.max_pivot())) {
    throw solver_error("resolvent_form: shift is numerically an eigenvalue");
  }
  return dot(u, lu.solve(v));
}

std::vector<cplx> resolvent_apply(const ComplexMatrix& a, cplx z,
                                  const std::vector<cplx>& x) {
  const LuFactorization lu(shifted(a, z));
  if (lu.singular()) {
    throw solver_error("resolvent_apply: shift is numerically an eigenvalue");
  }
  return lu.solve(x);
}

SylvesterCheck sylvester_det_check(const ComplexMatrix& a,
                                   const ComplexMatrix& b) {
  if (a.rows() != b.cols() || a.cols() != b.rows()) {
    throw contract_error("sylvester_det_check: A must be n x k, B k x n");
  }
  const std::size_t n = a.rows();
  const std::size_t k = a.cols();
  ComplexMatrix big = ComplexMatrix::identity(n) + a * b;
  ComplexMatrix small = ComplexMatrix::identity(k) + b * a;
  SylvesterCheck out;
  out.lhs = determinant(big).value;
  out.rhs = determinant(small).value;
  const double denom = std::max({std::abs(out.lhs), std::abs(out.rhs), 1.0});
  out.rel_err = std::abs(out.lhs - out.rhs) / denom;
  return out;
}

void orthonormalize_columns(ComplexMatrix& a) {
  const std::size_t n = a.rows();
  const std::size_t k = a.cols();
  for (std::size_t j = 0; j < k; ++j) {
    for (std::size_t prev = 0; prev < j; ++prev) {
      cplx proj{0.0, 0.0};
      for (std::size_t i = 0; i < n; ++i) {
        proj += std::conj(a(i, prev)) * a(i, j);
      }
      for (std::size_t i = 0; i < n; ++i) a(i, j) -= proj * a(i, prev);
    }
    double norm = 0.0;
    for (std::size_t i = 0; i < n; ++i) norm += std::norm(a(i, j));
    norm = std::sqrt(norm);
    if (norm <= 1e-14) {
      throw contract_error(
          "orthonormalize_columns: numerically dependent columns");
    }
    for (std::size_t i = 0; i < n; ++i) a(i, j) /= norm;
  }
}

}  // namespace nearherm
