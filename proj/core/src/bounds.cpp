#include "nearherm/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "nearherm/eig.hpp"
#include "nearherm/linalg.hpp"

namespace nearherm {

MatchResult min_cost_assignment(const std::vector<std::vector<double>>& cost) {
  const std::size_t n = cost.size();
  if (n == 0) throw contract_error("min_cost_assignment: empty cost matrix");
  for (const auto& row : cost) {
    if (row.size() != n) {
      throw contract_error("min_cost_assignment: cost matrix must be square");
    }
    for (double c : row) {
      if (!std::isfinite(c) || c < 0.0) {
        throw contract_error(
            "min_cost_assignment: costs must be finite and non-negative");
      }
    }
  }

  // Hungarian method with row/column potentials and shortest augmenting
  // paths; indices are shifted by one so slot 0 is the virtual source.
  constexpr double kInf = std::numeric_limits<double>::infinity();
  std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0);
  std::vector<std::size_t> match(n + 1, 0);  // match[j] = row assigned to j
  std::vector<std::size_t> way(n + 1, 0);
  for (std::size_t i = 1; i <= n; ++i) {
    match[0] = i;
    std::size_t j0 = 0;
    std::vector<double> minv(n + 1, kInf);
    std::vector<bool> used(n + 1, false);
    do {
      used[j0] = true;
      const std::size_t i0 = match[j0];
      double delta = kInf;
      std::size_t j1 = 0;
      for (std::size_t j = 1; j <= n; ++j) {
        if (used[j]) continue;
        const double cur = cost[i0 - 1][j - 1] - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (std::size_t j = 0; j <= n; ++j) {
        if (used[j]) {
          u[match[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (match[j0] != 0);
    do {
      const std::size_t j1 = way[j0];
      match[j0] = match[j1];
      j0 = j1;
    } while (j0 != 0);
  }

  MatchResult result;
  result.permutation.assign(n, 0);
  result.pair_costs.assign(n, 0.0);
  for (std::size_t j = 1; j <= n; ++j) {
    const std::size_t i = match[j] - 1;
    result.permutation[i] = j - 1;
    result.pair_costs[i] = cost[i][j - 1];
    result.total_cost += cost[i][j - 1];
  }
  return result;
}

MatchResult match_spectra(const std::vector<cplx>& a,
                          const std::vector<cplx>& b) {
  if (a.size() != b.size()) {
    throw contract_error("match_spectra: spectra must have equal size");
  }
  const std::size_t n = a.size();
  std::vector<std::vector<double>> cost(n, std::vector<double>(n));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      cost[i][j] = std::norm(a[i] - b[j]);
    }
  }
  return min_cost_assignment(cost);
}

BoundReport make_bound_report(double lhs, double rhs) {
  BoundReport report;
  report.lhs = lhs;
  report.rhs = rhs;
  report.satisfied = lhs <= rhs + 1e-9 * (1.0 + rhs);
  report.slack = rhs - lhs;
  return report;
}

namespace {

void require_hermitian(const ComplexMatrix& a, const char* who) {
  const double scale = std::max(a.max_abs(), 1e-300);
  if (a.hermitian_defect() > 1e-12 * scale) {
    throw contract_error(std::string(who) + ": matrix is not Hermitian");
  }
}

double frobenius_sq(const ComplexMatrix& a) {
  const double f = frobenius_norm(a);
  return f * f;
}

}  // namespace

BoundReport hoffman_wielandt_check(const ComplexMatrix& m,
                                   const ComplexMatrix& p) {
  if (!m.is_square() || !p.is_square() || m.rows() != p.rows()) {
    throw contract_error("hoffman_wielandt_check: shape mismatch");
  }
  require_hermitian(m, "hoffman_wielandt_check (M)");
  require_hermitian(p, "hoffman_wielandt_check (P)");
  const Spectrum before = eig_hermitian(m);
  const Spectrum after = eig_hermitian(m + p);
  const MatchResult match =
      match_spectra(before.eigenvalues, after.eigenvalues);
  return make_bound_report(match.total_cost, frobenius_sq(p));
}

KahanReports kahan_check(const ComplexMatrix& m, const ComplexMatrix& p) {
  if (!m.is_square() || !p.is_square() || m.rows() != p.rows()) {
    throw contract_error("kahan_check: shape mismatch");
  }
  require_hermitian(m, "kahan_check (M)");
  const std::size_t n = m.rows();

  const Spectrum base = eig_hermitian(m);
  Spectrum shifted = eig_general(m + p);
  // eig_general already emits the library order: descending real part,
  // ties by descending imaginary part -- the pairing used below.
  const std::vector<cplx>& mu = shifted.eigenvalues;

  double sup_nu = 0.0;
  double sum_nu_sq = 0.0;
  double paired = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    const double nu = mu[k].imag();
    sup_nu = std::max(sup_nu, std::abs(nu));
    sum_nu_sq += nu * nu;
    paired += std::norm(mu[k] - base.eigenvalues[k]);
  }

  const ComplexMatrix im_p = re_im_parts(p).second;
  KahanReports reports;
  reports.sup_imag = make_bound_report(sup_nu, spectral_norm(im_p));
  reports.sum_imag_sq = make_bound_report(sum_nu_sq, frobenius_sq(im_p));
  reports.paired_displacement = make_bound_report(paired, 2.0 * frobenius_sq(p));
  return reports;
}

BoundReport sun_check(const ComplexMatrix& m, const ComplexMatrix& p) {
  if (!m.is_square() || !p.is_square() || m.rows() != p.rows()) {
    throw contract_error("sun_check: shape mismatch");
  }
  const ComplexMatrix commutator =
      m * m.conj_transpose() - m.conj_transpose() * m;
  if (frobenius_norm(commutator) > 1e-10 * frobenius_sq(m)) {
    throw contract_error("sun_check: matrix is not normal");
  }
  const Spectrum before = eig_general(m);
  const Spectrum after = eig_general(m + p);
  const MatchResult match =
      match_spectra(before.eigenvalues, after.eigenvalues);
  return make_bound_report(match.total_cost,
                           static_cast<double>(m.rows()) * frobenius_sq(p));
}

double kolmogorov_distance(std::vector<double> samples,
                           const std::function<double(double)>& cdf) {
  if (samples.empty()) {
    throw contract_error("kolmogorov_distance: no samples");
  }
  std::sort(samples.begin(), samples.end());
  const double n = static_cast<double>(samples.size());
  double worst = 0.0;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const double f = cdf(samples[i]);
    const double below = static_cast<double>(i) / n;
    const double above = static_cast<double>(i + 1) / n;
    worst = std::max({worst, std::abs(f - below), std::abs(above - f)});
  }
  return worst;
}

}  // namespace nearherm
