#pragma once

#include <string>

#include "nearherm/rng.hpp"

namespace nearherm {

/// Scalar distribution used for matrix entries ("atom variables").
///
/// Supported kinds and parameters:
///   gaussian(mean, var)      normal with the given mean and variance
///   rademacher               +1 / -1 with probability 1/2 each
///   uniform(a, b)            uniform on [a, b)
///   two_point(p, lo, hi)     hi with probability p, lo with probability 1-p
struct AtomSpec {
  enum class Kind { gaussian, rademacher, uniform, two_point };

  Kind kind = Kind::gaussian;
  double a = 0.0;  // gaussian: mean,      uniform: lower, two_point: p
  double b = 1.0;  // gaussian: variance,  uniform: upper, two_point: lo
  double c = 0.0;  //                                      two_point: hi

  static AtomSpec gaussian(double mean, double var);
  static AtomSpec rademacher();
  static AtomSpec uniform(double lo, double hi);
  static AtomSpec two_point(double p, double lo, double hi);

  double mean() const;
  double variance() const;

  /// True when the distribution is a single point mass, i.e. it violates the
  /// non-degeneracy condition max_x P(atom = x) < 1.
  bool is_degenerate() const;

  /// Largest probability assigned to any single point (1 for point masses,
  /// 0 for continuous distributions).
  double max_point_mass() const;

  /// True when the support is bounded (everything except gaussian).
  bool is_bounded() const;

  double sample(Xoshiro256pp& rng) const;

  std::string describe() const;

  /// Validates parameter ranges (variance >= 0, p in [0,1], a <= b for
  /// uniform); throws contract_error otherwise.
  void validate() const;
};

}  // namespace nearherm
