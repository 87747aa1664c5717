#pragma once

#include <functional>
#include <vector>

#include "nearherm/types.hpp"

namespace nearherm {

/// Optimal assignment between two equally sized lists.
struct MatchResult {
  /// permutation[i] = column matched to row i; a bijection.
  std::vector<std::size_t> permutation;
  double total_cost = 0.0;
  std::vector<double> pair_costs;  // cost of each row's assigned pair
};

/// Minimum-cost perfect matching on a square cost matrix via the Hungarian
/// method with potentials, O(n^3).
///
/// pre: square, all entries finite and non-negative; else contract_error.
MatchResult min_cost_assignment(const std::vector<std::vector<double>>& cost);

/// Optimal matching of two complex spectra under squared distance
/// |a_i - b_{perm(i)}|^2.
MatchResult match_spectra(const std::vector<cplx>& a,
                          const std::vector<cplx>& b);

/// One verified inequality instance: lhs <= rhs up to a relative guard.
struct BoundReport {
  double lhs = 0.0;
  double rhs = 0.0;
  bool satisfied = false;  // lhs <= rhs + 1e-9 (1 + rhs)
  double slack = 0.0;      // rhs - lhs
};

BoundReport make_bound_report(double lhs, double rhs);

/// Optimal-matching squared eigenvalue displacement against the squared
/// Frobenius norm of the perturbation, for Hermitian M and Hermitian P.
/// Throws contract_error when either input is not Hermitian.
BoundReport hoffman_wielandt_check(const ComplexMatrix& m,
                                   const ComplexMatrix& p);

/// The three inequalities controlling eigenvalues of M + P for Hermitian M
/// and arbitrary P.  Writing the eigenvalues of M + P as mu_k + i nu_k
/// ordered by descending real part (ties by descending imaginary part) and
/// the eigenvalues of M as lambda_1 >= ... >= lambda_n:
///
///   sup_k |nu_k|                      <= || Im(P) ||        (spectral)
///   sum_k nu_k^2                      <= || Im(P) ||_2^2    (Frobenius)
///   sum_k |(mu_k + i nu_k)-lambda_k|^2 <= 2 || P ||_2^2
///
/// The third pairs the sorted lists positionally, not by optimal matching.
struct KahanReports {
  BoundReport sup_imag;
  BoundReport sum_imag_sq;
  BoundReport paired_displacement;
};
KahanReports kahan_check(const ComplexMatrix& m, const ComplexMatrix& p);

/// Optimal-matching squared displacement against n ||P||_2^2 (Frobenius) for
/// normal M and arbitrary P.  Normality gate:
/// ||M M* - M* M||_2 <= 1e-10 ||M||_2^2; violation throws contract_error.
BoundReport sun_check(const ComplexMatrix& m, const ComplexMatrix& p);

/// Two-sided Kolmogorov-Smirnov distance between the empirical distribution
/// of `samples` and the distribution function `cdf`.
/// pre: samples nonempty, else contract_error.
double kolmogorov_distance(std::vector<double> samples,
                           const std::function<double(double)>& cdf);

}  // namespace nearherm
