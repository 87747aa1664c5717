#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "nearherm/atoms.hpp"
#include "nearherm/rng.hpp"
#include "nearherm/types.hpp"

namespace nearherm {

/// Scaling applied to a sampled matrix before it is returned.
enum class Normalization {
  raw,               // no scaling
  one_over_sqrt_n,   // W / sqrt(n), the Wigner bulk scaling
  one_over_n,        // S / n, the square sample-covariance scaling
  one_over_sqrt_mn,  // S / sqrt(m n), the rectangular scaling
};

std::string to_string(Normalization n);

/// Which random matrix family to sample.
enum class Family { wigner, sample_covariance };

/// Describes a random matrix distribution.
///
/// wigner: symmetric n x n matrix, entries above the diagonal iid copies of
/// `offdiag`, diagonal entries iid copies of `diag`.  Entries are drawn in
/// row-major upper-triangle order (i <= j), one atom draw per entry, so the
/// matrix is a pure function of the stream seed.
///
/// sample_covariance: S = X^T X where X is m x n with iid `entry` atoms,
/// drawn in row-major order.
struct EnsembleSpec {
  Family family = Family::wigner;
  std::size_t n = 0;  // matrix dimension (columns of X for sample covariance)
  std::size_t m = 0;  // rows of X; ignored for wigner
  AtomSpec offdiag = AtomSpec::gaussian(0.0, 1.0);
  AtomSpec diag = AtomSpec::gaussian(0.0, 2.0);
  AtomSpec entry = AtomSpec::gaussian(0.0, 1.0);
  Normalization normalization = Normalization::raw;

  /// GOE: gaussian(0,1) off the diagonal, gaussian(0,2) on it, unscaled.
  static EnsembleSpec goe(std::size_t n);

  /// GOE scaled by 1/sqrt(n) so the spectrum concentrates on [-2, 2].
  static EnsembleSpec goe_normalized(std::size_t n);

  static EnsembleSpec wigner(std::size_t n, AtomSpec offdiag, AtomSpec diag,
                             Normalization norm = Normalization::raw);

  static EnsembleSpec sample_covariance(
      std::size_t m, std::size_t n,
      AtomSpec entry = AtomSpec::gaussian(0.0, 1.0),
      Normalization norm = Normalization::raw);

  /// Off-diagonal (resp. entry) atom has mean 0 and variance 1; diagonal has
  /// mean 0 and finite variance.  This is the moment gate the limit laws
  /// need.
  bool has_standard_moments() const;

  /// No atom used by this ensemble is a single point mass.
  bool is_nondegenerate() const;

  void validate() const;
};

/// Samples the symmetric Wigner matrix described by `spec` (family must be
/// wigner).  The result has exactly zero imaginary parts.
ComplexMatrix sample_wigner(const EnsembleSpec& spec, Xoshiro256pp& rng);

/// Samples S = X^T X (family must be sample_covariance).  The result is
/// symmetric positive semidefinite with rank at most min(m, n), stored with
/// exactly zero imaginary parts.
ComplexMatrix sample_covariance(const EnsembleSpec& spec, Xoshiro256pp& rng);

/// Dispatches on spec.family.
ComplexMatrix sample_matrix(const EnsembleSpec& spec, Xoshiro256pp& rng);

enum class Field { real, complex_field };

/// Uniform random unit vector in R^n or C^n: iid standard normals per real
/// coordinate, then normalized.
std::vector<cplx> sample_unit_sphere(std::size_t n, Field field,
                                     Xoshiro256pp& rng);

}  // namespace nearherm
