#include "nearherm/ensembles.hpp"

#include <cmath>

namespace nearherm {

std::string to_string(Normalization n) {
  switch (n) {
    case Normalization::raw:
      return "raw";
    case Normalization::one_over_sqrt_n:
      return "one_over_sqrt_n";
    case Normalization::one_over_n:
      return "one_over_n";
    case Normalization::one_over_sqrt_mn:
      return "one_over_sqrt_mn";
  }
  return "raw";
}

EnsembleSpec EnsembleSpec::goe(std::size_t n) {
  return wigner(n, AtomSpec::gaussian(0.0, 1.0), AtomSpec::gaussian(0.0, 2.0));
}

EnsembleSpec EnsembleSpec::goe_normalized(std::size_t n) {
  return wigner(n, AtomSpec::gaussian(0.0, 1.0), AtomSpec::gaussian(0.0, 2.0),
                Normalization::one_over_sqrt_n);
}

EnsembleSpec EnsembleSpec::wigner(std::size_t n, AtomSpec offdiag,
                                  AtomSpec diag, Normalization norm) {
  EnsembleSpec s;
  s.family = Family::wigner;
  s.n = n;
  s.offdiag = offdiag;
  s.diag = diag;
  s.normalization = norm;
  s.validate();
  return s;
}

EnsembleSpec EnsembleSpec::sample_covariance(std::size_t m, std::size_t n,
                                             AtomSpec entry,
                                             Normalization norm) {
  EnsembleSpec s;
  s.family = Family::sample_covariance;
  s.m = m;
  s.n = n;
  s.entry = entry;
  s.normalization = norm;
  s.validate();
  return s;
}

bool EnsembleSpec::has_standard_moments() const {
  auto standard = [](const AtomSpec& a) {
    return a.mean() == 0.0 && a.variance() == 1.0;
  };
  if (family == Family::wigner) {
    return standard(offdiag) && diag.mean() == 0.0;
  }
  return standard(entry);
}

bool EnsembleSpec::is_nondegenerate() const {
  if (family == Family::wigner) {
    return !offdiag.is_degenerate() && !diag.is_degenerate();
  }
  return !entry.is_degenerate();
}

void EnsembleSpec::validate() const {
  if (n == 0) {
    throw contract_error("EnsembleSpec: n must be at least 1");
  }
  if (family == Family::wigner) {
    offdiag.validate();
    diag.validate();
    // A degenerate off-diagonal atom collapses the ensemble; only n = 1
    // (no off-diagonal entries) escapes the requirement.
    if (n > 1 && offdiag.variance() <= 0.0) {
      throw contract_error(
          "EnsembleSpec: off-diagonal atom must have positive variance");
    }
  } else {
    entry.validate();
    if (m == 0) {
      throw contract_error("EnsembleSpec: sample covariance needs m >= 1");
    }
    if (entry.variance() <= 0.0) {
      throw contract_error(
          "EnsembleSpec: entry atom must have positive variance");
    }
  }
}

namespace {

double scale_factor(const EnsembleSpec& spec) {
  switch (spec.normalization) {
    case Normalization::raw:
      return 1.0;
    case Normalization::one_over_sqrt_n:
      return 1.0 / std::sqrt(static_cast<double>(spec.n));
    case Normalization::one_over_n:
      return 1.0 / static_cast<double>(spec.n);
    case Normalization::one_over_sqrt_mn:
      return 1.0 / std::sqrt(static_cast<double>(spec.m) *
                             static_cast<double>(spec.n));
  }
  return 1.0;
}

}  // namespace

ComplexMatrix sample_wigner(const EnsembleSpec& spec, Xoshiro256pp& rng) {
  if (spec.family != Family::wigner) {
    throw contract_error("sample_wigner: spec.family is not wigner");
  }
  spec.validate();
  const std::size_t n = spec.n;
  const double scale = scale_factor(spec);
  ComplexMatrix w(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    w(i, i) = scale * spec.diag.sample(rng);
    for (std::size_t j = i + 1; j < n; ++j) {
      const double v = scale * spec.offdiag.sample(rng);
      w(i, j) = v;
      w(j, i) = v;
    }
  }
  return w;
}

ComplexMatrix sample_covariance(const EnsembleSpec& spec, Xoshiro256pp& rng) {
  if (spec.family != Family::sample_covariance) {
    throw contract_error(
        "sample_covariance: spec.family is not sample_covariance");
  }
  spec.validate();
  const std::size_t m = spec.m;
  const std::size_t n = spec.n;
  std::vector<double> x(m * n);
  for (double& v : x) v = spec.entry.sample(rng);

  // Upper triangle of X^T X by rank-1 accumulation over the rows of X; the
  // inner loop is contiguous so it vectorizes.
  std::vector<double> s(n * n, 0.0);
  for (std::size_t i = 0; i < m; ++i) {
    const double* xi = x.data() + i * n;
    for (std::size_t j = 0; j < n; ++j) {
      const double xij = xi[j];
      if (xij == 0.0) continue;
      double* srow = s.data() + j * n;
      for (std::size_t l = j; l < n; ++l) srow[l] += xij * xi[l];
    }
  }
  const double scale = scale_factor(spec);
  ComplexMatrix out(n, n);
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t l = j; l < n; ++l) {
      const double v = scale * s[j * n + l];
      out(j, l) = v;
      out(l, j) = v;
    }
  }
  return out;
}

ComplexMatrix sample_matrix(const EnsembleSpec& spec, Xoshiro256pp& rng) {
  return spec.family == Family::wigner ? sample_wigner(spec, rng)
                                       : sample_covariance(spec, rng);
}

std::vector<cplx> sample_unit_sphere(std::size_t n, Field field,
                                     Xoshiro256pp& rng) {
  if (n == 0) {
    throw contract_error("sample_unit_sphere: n must be at least 1");
  }
  std::vector<cplx> v(n);
  if (field == Field::real) {
    for (auto& c : v) c = cplx{rng.gaussian(), 0.0};
  } else {
    for (auto& c : v) {
      const double re = rng.gaussian();
      const double im = rng.gaussian();
      c = cplx{re, im};
    }
  }
  double norm = vec_norm(v);
  while (norm == 0.0) {  // probability zero, but keep the contract total
    for (auto& c : v) c = cplx{rng.gaussian(), 0.0};
    norm = vec_norm(v);
  }
  for (auto& c : v) c /= norm;
  return v;
}

}  // namespace nearherm
