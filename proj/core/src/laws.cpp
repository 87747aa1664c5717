#include "nearherm/laws.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <string>

namespace nearherm {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kBranchCutMargin = 1e-9;

/// Larger-magnitude root of w^2 + b w + 1 = 0, computed without
/// cancellation; the companion root is its reciprocal.
cplx stable_unit_product_root(cplx b) {
  cplx root = std::sqrt(b * b - cplx(4.0, 0.0));
  // Align the radical with -b so the addition is constructive.
  if (b.real() * root.real() + b.imag() * root.imag() < 0.0) {
    root = -root;
  }
  return -(b + root) / 2.0;
}

}  // namespace

double semicircle_density(double x) {
  if (x <= -2.0 || x >= 2.0) return 0.0;
  return std::sqrt(4.0 - x * x) / (2.0 * kPi);
}

double semicircle_cdf(double x) {
  if (x <= -2.0) return 0.0;
  if (x >= 2.0) return 1.0;
  const double value =
      0.5 + (x * std::sqrt(4.0 - x * x) + 4.0 * std::asin(x / 2.0)) /
                (4.0 * kPi);
  return std::clamp(value, 0.0, 1.0);
}

double mp_density(double x, double y) {
  if (y <= 0.0) {
    throw contract_error("mp_density: ratio parameter must be positive");
  }
  const double sqrt_y = std::sqrt(y);
  const double lambda_minus = sqrt_y * (1.0 - 1.0 / sqrt_y) * (1.0 - 1.0 / sqrt_y);
  const double lambda_plus = sqrt_y * (1.0 + 1.0 / sqrt_y) * (1.0 + 1.0 / sqrt_y);
  if (x <= lambda_minus || x >= lambda_plus || x == 0.0) return 0.0;
  return sqrt_y / (2.0 * x * kPi) *
         std::sqrt((x - lambda_minus) * (lambda_plus - x));
}

double mp_cdf(double x) {
  if (x <= 0.0) return 0.0;
  if (x >= 4.0) return 1.0;
  const double phi = 2.0 * std::asin(std::sqrt(x) / 2.0);
  return std::clamp((phi + std::sin(phi)) / kPi, 0.0, 1.0);
}

double segment_distance(cplx z, double a, double b) {
  const double x = std::clamp(z.real(), a, b);
  return std::hypot(z.real() - x, z.imag());
}

cplx m_sc(cplx z) {
  if (segment_distance(z, -2.0, 2.0) <= kBranchCutMargin) {
    throw contract_error("m_sc: z is on the branch cut [-2, 2]");
  }
  // Roots of m^2 + z m + 1 = 0 multiply to 1: compute the large one
  // stably, invert for the small one, certify |m| <= 1.
  const cplx large = stable_unit_product_root(z);
  const cplx m = std::abs(large) > 1.0 ? 1.0 / large : large;
  return m;
}

cplx m_mp(cplx z) {
  if (segment_distance(z, 0.0, 4.0) <= kBranchCutMargin) {
    throw contract_error("m_mp: z is on the branch cut [0, 4]");
  }
  // With w = 1 + z m the equation z m^2 + z m + 1 = 0 becomes
  // w^2 + (z - 2) w + 1 = 0, whose roots multiply to 1; the branch
  // certificate |1 + z m| <= 1 selects the small root directly.
  const cplx large = stable_unit_product_root(z - 2.0);
  const cplx w = std::abs(large) > 1.0 ? 1.0 / large : large;
  return (w - 1.0) / z;
}

std::optional<Prediction> outlier_wigner(cplx lambda) {
  if (std::abs(lambda) <= 1.0) return std::nullopt;
  return Prediction{lambda + 1.0 / lambda, PredictionSource::wigner_additive,
                    {lambda}};
}

std::optional<Prediction> outlier_mp(cplx lambda) {
  if (std::abs(lambda) <= 1.0) return std::nullopt;
  return Prediction{2.0 + lambda + 1.0 / lambda,
                    PredictionSource::mp_multiplicative,
                    {lambda}};
}

double delta_prime(double delta) {
  if (delta <= 0.0) {
    throw contract_error("delta_prime: delta must be positive");
  }
  return delta * delta / (2.0 * (1.0 + delta));
}

Region Region::semicircle_nbhd(double delta) {
  Region region;
  region.kind = Kind::semicircle_nbhd;
  region.delta = delta;
  return region;
}

Region Region::mp_nbhd(double delta) {
  Region region;
  region.kind = Kind::mp_nbhd;
  region.delta = delta;
  return region;
}

Region Region::ellipse(double r) {
  if (r <= 1.0) {
    throw config_error("ellipse region: axis parameter must exceed 1, got " +
                       std::to_string(r));
  }
  Region region;
  region.kind = Kind::ellipse;
  region.r = r;
  return region;
}

Region Region::half_plane(int sign) {
  Region region;
  region.kind = Kind::half_plane;
  region.sign = sign >= 0 ? +1 : -1;
  return region;
}

Region Region::disk(double radius) {
  Region region;
  region.kind = Kind::disk;
  region.radius = radius;
  return region;
}

bool region_contains(const Region& region, cplx z) {
  switch (region.kind) {
    case Region::Kind::semicircle_nbhd:
      return segment_distance(z, -2.0, 2.0) <= region.delta;
    case Region::Kind::mp_nbhd:
      return segment_distance(z, 0.0, 4.0) <= region.delta;
    case Region::Kind::ellipse: {
      const double a = region.r + 1.0 / region.r;
      const double b = region.r - 1.0 / region.r;
      const double xs = z.real() / a;
      const double ys = z.imag() / b;
      return xs * xs + ys * ys <= 1.0;
    }
    case Region::Kind::half_plane:
      return region.sign > 0 ? z.imag() > 0.0 : z.imag() < 0.0;
    case Region::Kind::disk:
      return std::abs(z) <= region.radius;
  }
  throw config_error("region_contains: unknown region kind");
}

cplx adaptive_simpson(const std::function<cplx(double)>& f, double a,
                      double b, double tol) {
  struct Recurse {
    const std::function<cplx(double)>& f;
    int depth_limit;

    cplx run(double lo, double hi, cplx flo, cplx fmid, cplx fhi, cplx whole,
             double eps, int depth) const {
      const double mid = 0.5 * (lo + hi);
      const double lq = 0.5 * (lo + mid);
      const double rq = 0.5 * (mid + hi);
      const cplx flq = f(lq);
      const cplx frq = f(rq);
      const cplx left = (mid - lo) / 6.0 * (flo + 4.0 * flq + fmid);
      const cplx right = (hi - mid) / 6.0 * (fmid + 4.0 * frq + fhi);
      const cplx delta = left + right - whole;
      if (depth >= depth_limit || std::abs(delta) <= 15.0 * eps) {
        return left + right + delta / 15.0;
      }
      return run(lo, mid, flo, flq, fmid, left, 0.5 * eps, depth + 1) +
             run(mid, hi, fmid, frq, fhi, right, 0.5 * eps, depth + 1);
    }
  };

  if (a == b) return cplx(0.0, 0.0);
  const double mid = 0.5 * (a + b);
  const cplx fa = f(a);
  const cplx fm = f(mid);
  const cplx fb = f(b);
  const cplx whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  const Recurse recurse{f, 48};
  return recurse.run(a, b, fa, fm, fb, whole, tol, 0);
}

cplx integrate_semicircle(const std::function<cplx(double)>& f, double tol) {
  return adaptive_simpson(
      [&f](double phi) {
        const double s = std::sin(phi);
        return f(2.0 * std::cos(phi)) * (2.0 / kPi * s * s);
      },
      0.0, kPi, tol);
}

cplx integrate_mp(const std::function<cplx(double)>& f, double tol) {
  return adaptive_simpson(
      [&f](double phi) {
        const double half = std::sin(0.5 * phi);
        return f(4.0 * half * half) * ((1.0 + std::cos(phi)) / kPi);
      },
      0.0, kPi, tol);
}

Prediction overlap_wigner(cplx theta) {
  if (std::abs(theta) <= 1.0) {
    throw contract_error("overlap_wigner: spike magnitude must exceed 1");
  }
  const cplx t = theta + 1.0 / theta;
  // Numerator int rho_sc/(x - t) is the Stieltjes transform itself.
  const cplx numerator = m_sc(t);
  const cplx denominator = integrate_semicircle(
      [t](double x) { return cplx(1.0 / std::norm(x - t), 0.0); });
  const double value = std::norm(numerator) / denominator.real();
  return Prediction{cplx(value, 0.0), PredictionSource::overlap_wigner,
                    {theta, t}};
}

Prediction overlap_mp(cplx theta) {
  if (std::abs(theta) <= 1.0) {
    throw contract_error("overlap_mp: spike magnitude must exceed 1");
  }
  const cplx one(1.0, 0.0);
  const cplx t = theta * (one + 1.0 / theta) * (one + 1.0 / theta);
  const cplx numerator =
      integrate_mp([t](double x) { return cplx(x, 0.0) / (x - t); });
  const cplx denominator = integrate_mp(
      [t](double x) { return cplx(x * x / std::norm(x - t), 0.0); });
  const double value = std::norm(numerator) / denominator.real();
  return Prediction{cplx(value, 0.0), PredictionSource::overlap_mp,
                    {theta, t}};
}

}  // namespace nearherm
