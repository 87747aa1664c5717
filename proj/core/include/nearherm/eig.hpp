#pragma once

#include <optional>
#include <vector>

#include "nearherm/types.hpp"

namespace nearherm {

/// Result of an eigensolve.  Eigenvalues are sorted by the library-wide
/// spectral order (descending real part, ties by descending imaginary
/// part) so identical inputs always produce identical output ordering.
struct Spectrum {
  std::vector<cplx> eigenvalues;

  /// Column i is the eigenvector of eigenvalues[i]; only populated when
  /// requested (Hermitian solver) and orthonormal in that case.
  std::optional<ComplexMatrix> eigenvectors;

  /// max_i ||A v_i - lambda_i v_i||_2 over returned eigenvectors;
  /// 0 when no vectors were requested.
  double residual = 0.0;

  /// QR sweeps (general) or rotation sweeps (Hermitian) consumed.
  int iterations = 0;
};

/// Library-wide deterministic order on complex spectra.
bool spectral_less(const cplx& lhs, const cplx& rhs);
void sort_spectrum(std::vector<cplx>& values);

/// Eigendecomposition of a Hermitian matrix by Householder
/// tridiagonalization followed by implicit-shift QL sweeps.
///
/// pre:  ||A - A^*||_max <= 1e-12 * max(1, ||A||_max)
/// post: real eigenvalues (imaginary parts exactly zero), descending;
///       eigenvectors orthonormal when requested.
Spectrum eig_hermitian(const ComplexMatrix& a, bool want_vectors = false);

/// All eigenvalues of a general complex matrix by Householder reduction to
/// Hessenberg form followed by implicitly shifted QR with deflation.
/// Eigenvalues only; use inverse iteration for selected vectors.
///
/// Throws solver_error if the QR iteration exceeds its 30n sweep budget.
Spectrum eig_general(const ComplexMatrix& a);

/// One eigenvector of `a` for the (approximate) eigenvalue `lambda` via
/// inverse iteration, refined until ||A v - lambda v|| <= tol * ||A||_F or
/// the refinement cap is hit; the final Rayleigh quotient replaces lambda.
/// The returned vector is unit norm with its largest-magnitude coordinate
/// rotated to the positive real axis.
struct EigenPair {
  cplx eigenvalue;
  std::vector<cplx> eigenvector;
  double residual;
};
EigenPair eigenvector_for(const ComplexMatrix& a, cplx lambda,
                          double tol = 1e-8);

}  // namespace nearherm
