#include "nearherm/polynomial.hpp"

#include <algorithm>
#include <cmath>

#include "nearherm/eig.hpp"

namespace nearherm {

std::size_t Polynomial::degree() const {
  std::size_t d = coeffs.size();
  while (d > 1 && coeffs[d - 1] == cplx{0.0, 0.0}) --d;
  return d == 0 ? 0 : d - 1;
}

cplx Polynomial::eval(cplx z) const {
  cplx acc{0.0, 0.0};
  for (std::size_t k = coeffs.size(); k-- > 0;) {
    acc = acc * z + coeffs[k];
  }
  return acc;
}

Polynomial Polynomial::derivative() const {
  Polynomial d;
  if (coeffs.size() <= 1) {
    d.coeffs = {cplx{0.0, 0.0}};
    return d;
  }
  d.coeffs.resize(coeffs.size() - 1);
  for (std::size_t k = 1; k < coeffs.size(); ++k) {
    d.coeffs[k - 1] = static_cast<double>(k) * coeffs[k];
  }
  return d;
}

Polynomial Polynomial::from_roots(const std::vector<cplx>& roots) {
  Polynomial p;
  p.coeffs = {cplx{1.0, 0.0}};
  for (const cplx& r : roots) {
    // Multiply by (z - r).
    p.coeffs.push_back(cplx{0.0, 0.0});
    for (std::size_t k = p.coeffs.size(); k-- > 1;) {
      p.coeffs[k] = p.coeffs[k - 1] - r * p.coeffs[k];
    }
    p.coeffs[0] = -r * p.coeffs[0];
  }
  return p;
}

Polynomial Polynomial::combine_imag(const Polynomial& p, const Polynomial& q) {
  Polynomial out;
  out.coeffs.resize(std::max(p.coeffs.size(), q.coeffs.size()),
                    cplx{0.0, 0.0});
  for (std::size_t k = 0; k < p.coeffs.size(); ++k) out.coeffs[k] += p.coeffs[k];
  for (std::size_t k = 0; k < q.coeffs.size(); ++k) {
    out.coeffs[k] += cplx{0.0, 1.0} * q.coeffs[k];
  }
  return out;
}

std::vector<cplx> poly_roots(const Polynomial& p) {
  const std::size_t deg = p.degree();
  if (deg == 0) {
    throw contract_error("poly_roots: polynomial must have degree >= 1");
  }
  const cplx lead = p.coeffs[deg];
  if (lead == cplx{0.0, 0.0}) {
    throw contract_error("poly_roots: leading coefficient is zero");
  }
  // Frobenius companion: subdiagonal of ones, last column -a_k / a_deg.
  ComplexMatrix c(deg, deg);
  for (std::size_t i = 1; i < deg; ++i) c(i, i - 1) = 1.0;
  for (std::size_t i = 0; i < deg; ++i) {
    c(i, deg - 1) = -p.coeffs[i] / lead;
  }
  Spectrum s = eig_general(c);
  return s.eigenvalues;
}

ComplexMatrix critical_companion(const std::vector<cplx>& roots) {
  const std::size_t n = roots.size();
  if (n == 0) {
    throw contract_error("critical_companion: need at least one root");
  }
  const double inv_n = 1.0 / static_cast<double>(n);
  ComplexMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    cplx* row = m.row(i);
    const cplx di = roots[i];
    for (std::size_t j = 0; j < n; ++j) row[j] = -di * inv_n;
    row[i] += di;
  }
  return m;
}

std::vector<cplx> critical_points(const std::vector<cplx>& roots) {
  if (roots.size() < 2) {
    return {};
  }
  Spectrum s = eig_general(critical_companion(roots));
  // Drop the structural zero eigenvalue: the entry of smallest modulus
  // (first in spectral order on ties).
  std::size_t drop = 0;
  double best = std::abs(s.eigenvalues[0]);
  for (std::size_t i = 1; i < s.eigenvalues.size(); ++i) {
    const double mag = std::abs(s.eigenvalues[i]);
    if (mag < best) {
      best = mag;
      drop = i;
    }
  }
  std::vector<cplx> out;
  out.reserve(s.eigenvalues.size() - 1);
  for (std::size_t i = 0; i < s.eigenvalues.size(); ++i) {
    if (i != drop) out.push_back(s.eigenvalues[i]);
  }
  return out;
}

bool strictly_interlaces(std::vector<double> outer, std::vector<double> inner) {
  if (outer.size() != inner.size() + 1) {
    throw contract_error(
        "strictly_interlaces: outer set must have exactly one more point");
  }
  if (inner.empty()) return true;
  std::sort(outer.begin(), outer.end(), std::greater<double>());
  std::sort(inner.begin(), inner.end(), std::greater<double>());
  for (std::size_t i = 0; i < inner.size(); ++i) {
    if (!(outer[i] > inner[i] && inner[i] > outer[i + 1])) return false;
  }
  return true;
}

bool roots_in_one_half_plane(const std::vector<cplx>& roots, double margin) {
  if (roots.empty()) return false;
  bool all_upper = true;
  bool all_lower = true;
  for (const cplx& r : roots) {
    if (!(r.imag() > margin)) all_upper = false;
    if (!(r.imag() < -margin)) all_lower = false;
  }
  return all_upper || all_lower;
}

}  // namespace nearherm
