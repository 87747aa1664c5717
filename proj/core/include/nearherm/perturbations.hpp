#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "nearherm/types.hpp"

namespace nearherm {

/// Declarative description of a deterministic perturbation.  A spec is a
/// value object: `build` realizes it as a dense matrix of a requested size,
/// `apply` combines it with a base matrix either additively (M + P) or
/// multiplicatively (M(I + P)).
struct PerturbationSpec {
  enum class Kind {
    /// diag(values...) placed at the leading or trailing end of the
    /// diagonal, the rest zero.
    diagonal,
    /// theta * u v^*.
    rank_one,
    /// A * B with A (n x k) and B (k x n); realized rank <= k.
    low_rank_factors,
    /// A single nonzero entry at (row, col).
    corner_entry,
  };

  enum class Mode { additive, multiplicative };

  /// Where a short diagonal value list is anchored when padded to size n.
  enum class Anchor { leading, trailing };

  Kind kind = Kind::diagonal;
  Mode mode = Mode::additive;

  // Kind::diagonal
  std::vector<cplx> values;
  Anchor anchor = Anchor::leading;

  // Kind::rank_one
  cplx theta = cplx(1.0, 0.0);
  std::vector<cplx> left;   // u
  std::vector<cplx> right;  // v

  // Kind::low_rank_factors
  ComplexMatrix factor_a;  // n x k
  ComplexMatrix factor_b;  // k x n

  // Kind::corner_entry (0-based indices)
  std::size_t row = 0;
  std::size_t col = 0;
  cplx value = cplx(0.0, 0.0);

  static PerturbationSpec make_diagonal(std::vector<cplx> values,
                                        Anchor anchor = Anchor::leading,
                                        Mode mode = Mode::additive);
  static PerturbationSpec make_rank_one(cplx theta, std::vector<cplx> u,
                                        std::vector<cplx> v,
                                        Mode mode = Mode::additive);
  static PerturbationSpec make_low_rank(ComplexMatrix a, ComplexMatrix b,
                                        Mode mode = Mode::additive);
  static PerturbationSpec make_corner(std::size_t row, std::size_t col,
                                      cplx value, Mode mode = Mode::additive);

  /// An upper bound on the rank of the realized matrix, independent of n:
  /// nonzero diagonal count, 1, inner factor dimension, or 1 respectively.
  std::size_t declared_rank() const;

  /// Shape sanity independent of a target size (factor conformability,
  /// nonempty vectors).  Throws config_error on violation.
  void validate() const;
};

std::string to_string(PerturbationSpec::Kind kind);
std::string to_string(PerturbationSpec::Mode mode);
std::string to_string(PerturbationSpec::Anchor anchor);
PerturbationSpec::Kind perturbation_kind_from_string(const std::string& s);
PerturbationSpec::Mode perturbation_mode_from_string(const std::string& s);
PerturbationSpec::Anchor perturbation_anchor_from_string(const std::string& s);

/// Dense n x n realization of the perturbation.  Throws config_error when
/// the spec cannot fit the requested size (too many diagonal values, vector
/// length mismatch, factor shape mismatch, out-of-range corner position).
ComplexMatrix build(const PerturbationSpec& spec, std::size_t n);

/// Additive mode returns M + P, multiplicative returns M(I + P), with P the
/// dense realization at the size of M.  Throws config_error on dimension
/// mismatch and contract_error when M is not square.
ComplexMatrix apply(const ComplexMatrix& m, const PerturbationSpec& spec);

/// The nonzero eigenvalues of the realized n x n perturbation, computed from
/// the structure rather than the dense matrix: diagonal values, theta v^* u
/// for a rank-one spec, the spectrum of the small k x k product B A for
/// factored specs, and the corner value when it sits on the diagonal (an
/// off-diagonal corner entry is nilpotent).  Throws config_error when the
/// spec cannot fit size n.
std::vector<cplx> spike_eigenvalues(const PerturbationSpec& spec,
                                    std::size_t n);

/// Output of the deterministic nonreal construction below.  `u` and `v`
/// are the perturbation factors; the eigenvalue split is reported so
/// callers can verify the shared-spectrum contract by assignment matching.
struct NonrealVectors {
  std::vector<cplx> u;
  std::vector<cplx> v;
  std::vector<cplx> selected;    // the k mixed (largest) eigenvalues of M
  std::vector<cplx> unselected;  // the n-k eigenvalues shared with M + i u v^*
};

/// Builds the vectors of the deterministic construction that pushes a
/// chosen number of eigenvalues of a Hermitian matrix off the real axis:
/// with unit eigenvectors w_1..w_k of the k largest eigenvalues of M,
///
///   v = sum_j z_j w_j,   u = sum_j a_j z_j w_j,
///
/// so that M + i u v^* has exactly k eigenvalues with imaginary part of the
/// common sign of the a_j, while the remaining n-k eigenvalues of M are
/// preserved exactly.
///
/// pre: M Hermitian; 1 <= k <= n; z and a have length k; every z_j != 0;
///      the a_j all strictly positive or all strictly negative; the k
///      largest eigenvalues pairwise distinct with gap > 1e-9 * ||M||.
/// Violations throw contract_error.
///
/// Each w_j is phase-normalized so its largest-magnitude coordinate is
/// positive real, making the output deterministic.
NonrealVectors construct_nonreal_vector(const ComplexMatrix& m, std::size_t k,
                                        const std::vector<cplx>& z,
                                        const std::vector<double>& a);

}  // namespace nearherm
