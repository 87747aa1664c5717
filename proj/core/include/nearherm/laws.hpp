#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "nearherm/types.hpp"

namespace nearherm {

/// Semicircle density sqrt(4 - x^2) / (2 pi) supported on [-2, 2].
double semicircle_density(double x);

/// Closed-form semicircle CDF, clipped to [0, 1].
double semicircle_cdf(double x);

/// Marchenko-Pastur density with ratio parameter y > 0, supported on
/// [lambda_-, lambda_+] with lambda_pm = sqrt(y) (1 pm 1/sqrt(y))^2.  The
/// point mass 1 - y at the origin (y < 1) is not part of the density and is
/// accounted for separately by callers.
double mp_density(double x, double y);

/// Closed-form CDF of the y = 1 Marchenko-Pastur law on [0, 4].
double mp_cdf(double x);

/// Euclidean distance from z to the real segment [a, b].
double segment_distance(cplx z, double a, double b);

/// Stieltjes transform of the semicircle law: the root of m^2 + z m + 1 = 0
/// with |m| <= 1, which is the analytic continuation of
/// int rho_sc(x)/(x - z) dx off the support.
///
/// pre: dist(z, [-2, 2]) > 1e-9, else contract_error (branch cut).
/// post: |m + 1/m + z| <= 1e-12.
cplx m_sc(cplx z);

/// Stieltjes transform of the y = 1 Marchenko-Pastur law: the root of
/// z m^2 + z m + 1 = 0 with |1 + z m| <= 1.
///
/// pre: dist(z, [0, 4]) > 1e-9, else contract_error (covers z = 0).
/// post: |m + 1/(z + z m)| <= 1e-12.
cplx m_mp(cplx z);

/// Provenance of an analytic prediction.
enum class PredictionSource {
  wigner_additive,
  mp_multiplicative,
  overlap_wigner,
  overlap_mp,
};

struct Prediction {
  cplx value;
  PredictionSource source;
  std::vector<cplx> inputs;  // the parameters the value was derived from
};

/// Predicted outlier location lambda + 1/lambda of an additive spike with
/// eigenvalue lambda.  Spikes with |lambda| <= 1 produce no outlier and
/// return nullopt.
std::optional<Prediction> outlier_wigner(cplx lambda);

/// Predicted outlier location lambda (1 + 1/lambda)^2 = 2 + lambda +
/// 1/lambda of a multiplicative spike; nullopt when |lambda| <= 1.
std::optional<Prediction> outlier_mp(cplx lambda);

/// Separation margin delta' = delta^2 / (2 (1 + delta)) guaranteeing that
/// spikes with |lambda| >= 1 + delta predict outliers outside the
/// delta'-neighborhood of the bulk support.  pre: delta > 0.
double delta_prime(double delta);

/// Geometric region of the complex plane used to classify eigenvalues.
struct Region {
  enum class Kind { semicircle_nbhd, mp_nbhd, ellipse, half_plane, disk };

  Kind kind = Kind::semicircle_nbhd;
  double delta = 0.0;   // semicircle_nbhd, mp_nbhd
  double r = 0.0;       // ellipse: semi-axes r + 1/r and r - 1/r
  int sign = +1;        // half_plane: sign of the imaginary part
  double radius = 0.0;  // disk centered at the origin

  static Region semicircle_nbhd(double delta);
  static Region mp_nbhd(double delta);
  static Region ellipse(double r);  // pre: r > 1, else config_error
  static Region half_plane(int sign);
  static Region disk(double radius);
};

bool region_contains(const Region& region, cplx z);

/// Adaptive Simpson integration of a complex-valued function on [a, b] to
/// absolute tolerance tol.
cplx adaptive_simpson(const std::function<cplx(double)>& f, double a,
                      double b, double tol = 1e-10);

/// int f(x) rho_sc(x) dx via the substitution x = 2 cos(phi), which turns
/// the weight into (2/pi) sin^2(phi) and removes endpoint singularities.
cplx integrate_semicircle(const std::function<cplx(double)>& f,
                          double tol = 1e-10);

/// int f(x) rho_MP,1(x) dx via x = 4 sin^2(phi/2), weight (1+cos phi)/pi.
cplx integrate_mp(const std::function<cplx(double)>& f, double tol = 1e-10);

/// Limiting squared overlap |u* v|^2 between an additive rank-one spike
/// direction and the outlier unit eigenvector, for spike eigenvalue theta:
///
///   |int rho_sc/(x - t)|^2 / int rho_sc/|x - t|^2,  t = theta + 1/theta.
///
/// pre: |theta| > 1, else contract_error.
Prediction overlap_wigner(cplx theta);

/// Sample-covariance analogue at t = theta (1 + 1/theta)^2:
///
///   |int x rho_MP,1/(x - t)|^2 / int x^2 rho_MP,1/|x - t|^2.
///
/// pre: |theta| > 1, else contract_error.
Prediction overlap_mp(cplx theta);

}  // namespace nearherm
