#pragma once

#include <cstddef>
#include <utility>
#include <vector>

#include "nearherm/types.hpp"

namespace nearherm {

/// Frobenius norm sqrt(sum |a_ij|^2).
double frobenius_norm(const ComplexMatrix& a);

/// Operator (spectral) norm: the square root of the top eigenvalue of the
/// Gram matrix A^* A (computed on the smaller side for rectangular A).
/// Deterministic, with the relative accuracy of the Hermitian eigensolver.
double spectral_norm(const ComplexMatrix& a);

/// Hermitian and skew parts: A = Re(A) + i Im(A) with
/// Re(A) = (A + A^*)/2 and Im(A) = (A - A^*)/(2i); both results Hermitian.
std::pair<ComplexMatrix, ComplexMatrix> re_im_parts(const ComplexMatrix& a);

/// Rank-one matrix u v^*.
ComplexMatrix outer(const std::vector<cplx>& u, const std::vector<cplx>& v);

/// LU factorization with partial pivoting, kept for repeated solves.
class LuFactorization {
 public:
  explicit LuFactorization(ComplexMatrix a);

  /// True when a pivot collapsed entirely (a numerically singular matrix).
  bool singular() const { return singular_; }

  /// Ratio max|U_ii| / min|U_ii|; a cheap conditioning proxy.
  double pivot_ratio() const;
  double min_pivot() const { return min_pivot_; }
  double max_pivot() const { return max_pivot_; }

  /// Solves A x = b; throws solver_error when singular.
  std::vector<cplx> solve(std::vector<cplx> b) const;

  /// Determinant as a phase and a log-magnitude, immune to overflow:
  /// det(A) = phase * exp(log_abs).  `value` additionally carries the
  /// plain product, which may overflow for large dimensions.
  struct Determinant {
    cplx value;
    double log_abs;
    cplx phase;
  };
  Determinant determinant() const;

  std::size_t dim() const { return lu_.rows(); }

 private:
  ComplexMatrix lu_;
  std::vector<std::size_t> perm_;
  int swap_parity_ = 1;
  bool singular_ = false;
  double min_pivot_ = 0.0;
  double max_pivot_ = 0.0;
};

/// det(A) through LU with partial pivoting.
LuFactorization::Determinant determinant(const ComplexMatrix& a);

/// Quadratic resolvent form u^* (A - z I)^{-1} v.  Throws solver_error when
/// z is numerically an eigenvalue (detected through pivot collapse).
cplx resolvent_form(const ComplexMatrix& a, cplx z, const std::vector<cplx>& u,
                    const std::vector<cplx>& v);

/// (A - z I)^{-1} x by LU solve.
std::vector<cplx> resolvent_apply(const ComplexMatrix& a, cplx z,
                                  const std::vector<cplx>& x);

/// Both sides of the determinant identity det(I_n + A B) = det(I_k + B A)
/// for A (n x k) and B (k x n), evaluated independently.
struct SylvesterCheck {
  cplx lhs;
  cplx rhs;
  double rel_err;
};
SylvesterCheck sylvester_det_check(const ComplexMatrix& a,
                                   const ComplexMatrix& b);

/// Orthonormalizes the columns of `a` in place with modified Gram-Schmidt.
/// Throws contract_error when columns are numerically dependent.
void orthonormalize_columns(ComplexMatrix& a);

}  // namespace nearherm
