#include "nearherm/perturbations.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>

#include "nearherm/eig.hpp"
#include "nearherm/linalg.hpp"

namespace nearherm {

PerturbationSpec PerturbationSpec::make_diagonal(std::vector<cplx> values,
                                                 Anchor anchor, Mode mode) {
  PerturbationSpec spec;
  spec.kind = Kind::diagonal;
  spec.mode = mode;
  spec.values = std::move(values);
  spec.anchor = anchor;
  spec.validate();
  return spec;
}

PerturbationSpec PerturbationSpec::make_rank_one(cplx theta,
                                                 std::vector<cplx> u,
                                                 std::vector<cplx> v,
                                                 Mode mode) {
  PerturbationSpec spec;
  spec.kind = Kind::rank_one;
  spec.mode = mode;
  spec.theta = theta;
  spec.left = std::move(u);
  spec.right = std::move(v);
  spec.validate();
  return spec;
}

PerturbationSpec PerturbationSpec::make_low_rank(ComplexMatrix a,
                                                 ComplexMatrix b, Mode mode) {
  PerturbationSpec spec;
  spec.kind = Kind::low_rank_factors;
  spec.mode = mode;
  spec.factor_a = std::move(a);
  spec.factor_b = std::move(b);
  spec.validate();
  return spec;
}

PerturbationSpec PerturbationSpec::make_corner(std::size_t row,
                                               std::size_t col, cplx value,
                                               Mode mode) {
  PerturbationSpec spec;
  spec.kind = Kind::corner_entry;
  spec.mode = mode;
  spec.row = row;
  spec.col = col;
  spec.value = value;
  spec.validate();
  return spec;
}

std::size_t PerturbationSpec::declared_rank() const {
  switch (kind) {
    case Kind::diagonal: {
      std::size_t nonzero = 0;
      for (const cplx& d : values) {
        if (d != cplx(0.0, 0.0)) ++nonzero;
      }
      return nonzero;
    }
    case Kind::rank_one:
      return 1;
    case Kind::low_rank_factors:
      return factor_a.cols();
    case Kind::corner_entry:
      return 1;
  }
  throw config_error("perturbation: unknown kind");
}

void PerturbationSpec::validate() const {
  switch (kind) {
    case Kind::diagonal:
      if (values.empty()) {
        throw config_error("diagonal perturbation: empty value list");
      }
      return;
    case Kind::rank_one:
      if (left.empty() || right.empty()) {
        throw config_error("rank-one perturbation: empty factor vector");
      }
      if (left.size() != right.size()) {
        throw config_error("rank-one perturbation: factor lengths differ (" +
                           std::to_string(left.size()) + " vs " +
                           std::to_string(right.size()) + ")");
      }
      return;
    case Kind::low_rank_factors:
      if (factor_a.rows() == 0 || factor_b.rows() == 0) {
        throw config_error("low-rank perturbation: empty factor");
      }
      if (factor_a.cols() != factor_b.rows()) {
        throw config_error(
            "low-rank perturbation: inner dimensions differ (" +
            std::to_string(factor_a.cols()) + " vs " +
            std::to_string(factor_b.rows()) + ")");
      }
      if (factor_a.rows() != factor_b.cols()) {
        throw config_error(
            "low-rank perturbation: realization is not square (" +
            std::to_string(factor_a.rows()) + " x " +
            std::to_string(factor_b.cols()) + ")");
      }
      return;
    case Kind::corner_entry:
      return;
  }
  throw config_error("perturbation: unknown kind");
}

std::string to_string(PerturbationSpec::Kind kind) {
  switch (kind) {
    case PerturbationSpec::Kind::diagonal:
      return "diagonal";
    case PerturbationSpec::Kind::rank_one:
      return "rank_one";
    case PerturbationSpec::Kind::low_rank_factors:
      return "low_rank_factors";
    case PerturbationSpec::Kind::corner_entry:
      return "corner_entry";
  }
  return "unknown";
}

std::string to_string(PerturbationSpec::Mode mode) {
  return mode == PerturbationSpec::Mode::additive ? "additive"
                                                  : "multiplicative";
}

std::string to_string(PerturbationSpec::Anchor anchor) {
  return anchor == PerturbationSpec::Anchor::leading ? "leading" : "trailing";
}

PerturbationSpec::Kind perturbation_kind_from_string(const std::string& s) {
  if (s == "diagonal") return PerturbationSpec::Kind::diagonal;
  if (s == "rank_one") return PerturbationSpec::Kind::rank_one;
  if (s == "low_rank_factors") return PerturbationSpec::Kind::low_rank_factors;
  if (s == "corner_entry") return PerturbationSpec::Kind::corner_entry;
  throw config_error("unknown perturbation kind '" + s + "'");
}

PerturbationSpec::Mode perturbation_mode_from_string(const std::string& s) {
  if (s == "additive") return PerturbationSpec::Mode::additive;
  if (s == "multiplicative") return PerturbationSpec::Mode::multiplicative;
  throw config_error("unknown perturbation mode '" + s + "'");
}

PerturbationSpec::Anchor perturbation_anchor_from_string(
    const std::string& s) {
  if (s == "leading") return PerturbationSpec::Anchor::leading;
  if (s == "trailing") return PerturbationSpec::Anchor::trailing;
  throw config_error("unknown diagonal anchor '" + s + "'");
}

ComplexMatrix build(const PerturbationSpec& spec, std::size_t n) {
  if (n == 0) throw config_error("perturbation build: size must be positive");
  spec.validate();
  switch (spec.kind) {
    case PerturbationSpec::Kind::diagonal: {
      if (spec.values.size() > n) {
        throw config_error("diagonal perturbation: " +
                           std::to_string(spec.values.size()) +
                           " values do not fit size " + std::to_string(n));
      }
      ComplexMatrix p(n, n);
      const std::size_t offset =
          spec.anchor == PerturbationSpec::Anchor::leading
              ? 0
              : n - spec.values.size();
      for (std::size_t i = 0; i < spec.values.size(); ++i) {
        p(offset + i, offset + i) = spec.values[i];
      }
      return p;
    }
    case PerturbationSpec::Kind::rank_one: {
      if (spec.left.size() != n) {
        throw config_error("rank-one perturbation: factor length " +
                           std::to_string(spec.left.size()) +
                           " does not match size " + std::to_string(n));
      }
      ComplexMatrix p = outer(spec.left, spec.right);
      p *= spec.theta;
      return p;
    }
    case PerturbationSpec::Kind::low_rank_factors: {
      if (spec.factor_a.rows() != n) {
        throw config_error("low-rank perturbation: factors realize size " +
                           std::to_string(spec.factor_a.rows()) +
                           ", requested " + std::to_string(n));
      }
      return spec.factor_a * spec.factor_b;
    }
    case PerturbationSpec::Kind::corner_entry: {
      if (spec.row >= n || spec.col >= n) {
        throw config_error("corner perturbation: position (" +
                           std::to_string(spec.row) + ", " +
                           std::to_string(spec.col) +
                           ") outside size " + std::to_string(n));
      }
      ComplexMatrix p(n, n);
      p(spec.row, spec.col) = spec.value;
      return p;
    }
  }
  throw config_error("perturbation: unknown kind");
}

ComplexMatrix apply(const ComplexMatrix& m, const PerturbationSpec& spec) {
  if (!m.is_square()) {
    throw contract_error("perturbation apply: base matrix must be square");
  }
  const std::size_t n = m.rows();
  if (spec.mode == PerturbationSpec::Mode::additive) {
    return m + build(spec, n);
  }
  // M(I + P) = M + M P, with the product M P formed from the structure of P
  // instead of a dense n x n multiply.
  if (n == 0) throw config_error("perturbation apply: size must be positive");
  spec.validate();
  ComplexMatrix a = m;
  switch (spec.kind) {
    case PerturbationSpec::Kind::diagonal: {
      if (spec.values.size() > n) {
        throw config_error("diagonal perturbation: " +
                           std::to_string(spec.values.size()) +
                           " values do not fit size " + std::to_string(n));
      }
      // P scales columns: (M P)(i, j) = M(i, j) * values[j - offset].
      const std::size_t offset =
          spec.anchor == PerturbationSpec::Anchor::leading
              ? 0
              : n - spec.values.size();
      for (std::size_t j = 0; j < spec.values.size(); ++j) {
        const cplx w = spec.values[j];
        if (w == cplx(0.0, 0.0)) continue;
        const std::size_t col = offset + j;
        for (std::size_t i = 0; i < n; ++i) a(i, col) += m(i, col) * w;
      }
      return a;
    }
    case PerturbationSpec::Kind::rank_one: {
      if (spec.left.size() != n) {
        throw config_error("rank-one perturbation: factor length " +
                           std::to_string(spec.left.size()) +
                           " does not match size " + std::to_string(n));
      }
      // M (theta u v^*) = theta (M u) v^*.
      const std::vector<cplx> mu = mat_vec(m, spec.left);
      for (std::size_t i = 0; i < n; ++i) {
        cplx* row = a.row(i);
        const cplx scaled = spec.theta * mu[i];
        for (std::size_t j = 0; j < n; ++j) {
          row[j] += scaled * std::conj(spec.right[j]);
        }
      }
      return a;
    }
    case PerturbationSpec::Kind::low_rank_factors: {
      if (spec.factor_a.rows() != n) {
        throw config_error("low-rank perturbation: factors realize size " +
                           std::to_string(spec.factor_a.rows()) +
                           ", requested " + std::to_string(n));
      }
      // M (A B) = (M A) B costs O(n^2 k).
      return a + (m * spec.factor_a) * spec.factor_b;
    }
    case PerturbationSpec::Kind::corner_entry: {
      if (spec.row >= n || spec.col >= n) {
        throw config_error("corner perturbation: position (" +
                           std::to_string(spec.row) + ", " +
                           std::to_string(spec.col) + ") outside size " +
                           std::to_string(n));
      }
      // M (value e_row e_col^T) adds value * M(:, row) to column col.
      for (std::size_t i = 0; i < n; ++i) {
        a(i, spec.col) += spec.value * m(i, spec.row);
      }
      return a;
    }
  }
  throw config_error("perturbation: unknown kind");
}

std::vector<cplx> spike_eigenvalues(const PerturbationSpec& spec,
                                    std::size_t n) {
  if (n == 0) throw config_error("spike eigenvalues: size must be positive");
  spec.validate();
  std::vector<cplx> out;
  switch (spec.kind) {
    case PerturbationSpec::Kind::diagonal: {
      if (spec.values.size() > n) {
        throw config_error("diagonal perturbation: " +
                           std::to_string(spec.values.size()) +
                           " values do not fit size " + std::to_string(n));
      }
      for (const cplx& v : spec.values) {
        if (v != cplx(0.0, 0.0)) out.push_back(v);
      }
      return out;
    }
    case PerturbationSpec::Kind::rank_one: {
      if (spec.left.size() != n) {
        throw config_error("rank-one perturbation: factor length " +
                           std::to_string(spec.left.size()) +
                           " does not match size " + std::to_string(n));
      }
      const cplx ev = spec.theta * dot(spec.right, spec.left);
      if (ev != cplx(0.0, 0.0)) out.push_back(ev);
      return out;
    }
    case PerturbationSpec::Kind::low_rank_factors: {
      if (spec.factor_a.rows() != n) {
        throw config_error("low-rank perturbation: factors realize size " +
                           std::to_string(spec.factor_a.rows()) +
                           ", requested " + std::to_string(n));
      }
      // Nonzero spectrum of A B equals that of the small product B A.
      const ComplexMatrix small = spec.factor_b * spec.factor_a;
      double scale = 0.0;
      for (std::size_t i = 0; i < small.rows(); ++i) {
        for (std::size_t j = 0; j < small.cols(); ++j) {
          scale = std::max(scale, std::abs(small(i, j)));
        }
      }
      const Spectrum s = eig_general(small);
      for (const cplx& ev : s.eigenvalues) {
        if (std::abs(ev) > 1e-12 * std::max(scale, 1.0)) out.push_back(ev);
      }
      return out;
    }
    case PerturbationSpec::Kind::corner_entry: {
      if (spec.row >= n || spec.col >= n) {
        throw config_error("corner perturbation: position (" +
                           std::to_string(spec.row) + ", " +
                           std::to_string(spec.col) + ") outside size " +
                           std::to_string(n));
      }
      if (spec.row == spec.col) out.push_back(spec.value);
      return out;
    }
  }
  throw config_error("perturbation: unknown kind");
}

NonrealVectors construct_nonreal_vector(const ComplexMatrix& m, std::size_t k,
                                        const std::vector<cplx>& z,
                                        const std::vector<double>& a) {
  const std::size_t n = m.rows();
  if (!m.is_square()) {
    throw contract_error("nonreal construction: matrix must be square");
  }
  if (k == 0 || k > n) {
    throw contract_error("nonreal construction: k must be in [1, n]");
  }
  if (z.size() != k || a.size() != k) {
    throw contract_error(
        "nonreal construction: coefficient lists must have length k");
  }
  for (const cplx& zj : z) {
    if (zj == cplx(0.0, 0.0)) {
      throw contract_error("nonreal construction: zero mixing coefficient");
    }
  }
  const bool positive = a[0] > 0.0;
  for (double aj : a) {
    if (aj == 0.0 || (aj > 0.0) != positive) {
      throw contract_error(
          "nonreal construction: weights must share one strict sign");
    }
  }

  Spectrum spectrum = eig_hermitian(m, /*want_vectors=*/true);
  const std::vector<cplx>& lambda = spectrum.eigenvalues;

  // The matrix norm equals the largest eigenvalue magnitude here, so the
  // distinctness gate can reuse the spectrum we already hold.
  double scale = 0.0;
  for (const cplx& l : lambda) scale = std::max(scale, std::abs(l));
  const double min_gap = 1e-9 * scale;
  for (std::size_t i = 0; i + 1 < k; ++i) {
    if (lambda[i].real() - lambda[i + 1].real() <= min_gap) {
      throw contract_error(
          "nonreal construction: selected eigenvalues are not distinct "
          "(gap at position " +
          std::to_string(i) + " is " +
          std::to_string(lambda[i].real() - lambda[i + 1].real()) + ")");
    }
  }

  const ComplexMatrix& q = *spectrum.eigenvectors;
  NonrealVectors out;
  out.u.assign(n, cplx(0.0, 0.0));
  out.v.assign(n, cplx(0.0, 0.0));
  out.selected.assign(lambda.begin(), lambda.begin() + k);
  out.unselected.assign(lambda.begin() + k, lambda.end());

  for (std::size_t j = 0; j < k; ++j) {
    // Canonical phase: rotate the largest-magnitude coordinate of the
    // eigenvector onto the positive real axis.
    std::size_t arg_max = 0;
    double best = -1.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double mag = std::abs(q(i, j));
      if (mag > best) {
        best = mag;
        arg_max = i;
      }
    }
    const cplx pivot = q(arg_max, j);
    const cplx phase =
        best > 0.0 ? std::conj(pivot) / std::abs(pivot) : cplx(1.0, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
      const cplx w = phase * q(i, j);
      out.v[i] += z[j] * w;
      out.u[i] += a[j] * z[j] * w;
    }
  }
  return out;
}

}  // namespace nearherm
