#pragma once

#include <vector>

#include "nearherm/types.hpp"

namespace nearherm {

/// Polynomial with complex coefficients, ascending powers:
/// coeffs[k] multiplies z^k.  The leading stored coefficient may be zero
/// only for the zero polynomial itself.
struct Polynomial {
  std::vector<cplx> coeffs;

  std::size_t degree() const;
  cplx eval(cplx z) const;
  Polynomial derivative() const;

  /// Monic polynomial prod_j (z - roots[j]).
  static Polynomial from_roots(const std::vector<cplx>& roots);

  /// p + i*q, the Hermite-Biehler combination of two real polynomials.
  static Polynomial combine_imag(const Polynomial& p, const Polynomial& q);
};

/// All complex roots via the Frobenius companion matrix and the general
/// eigensolver.  Requires degree >= 1 and a nonzero leading coefficient.
std::vector<cplx> poly_roots(const Polynomial& p);

/// Companion matrix D(I - J/n) for D = diag(roots) and J the all-ones
/// matrix: its spectrum is the critical points of prod (z - roots[j])
/// together with one extra zero eigenvalue.
ComplexMatrix critical_companion(const std::vector<cplx>& roots);

/// Critical points of prod (z - roots[j]): the spectrum of the companion
/// above with the eigenvalue nearest the origin removed.  Returns n - 1
/// points in spectral order.
std::vector<cplx> critical_points(const std::vector<cplx>& roots);

/// True when the two real root sets strictly interlace: with both sorted
/// descending, outer[0] > inner[0] > outer[1] > ... > inner[s-2] > outer[s-1].
/// Sizes must differ by exactly one (outer one larger).
bool strictly_interlaces(std::vector<double> outer, std::vector<double> inner);

/// True when every root lies strictly in the open upper half-plane, or every
/// root lies strictly in the open lower half-plane.  `margin` widens the
/// excluded band around the real axis.
bool roots_in_one_half_plane(const std::vector<cplx>& roots, double margin = 0.0);

}  // namespace nearherm
