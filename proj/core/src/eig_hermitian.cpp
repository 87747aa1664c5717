#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <vector>

#include "nearherm/eig.hpp"
#include "nearherm/linalg.hpp"

namespace nearherm {

bool spectral_less(const cplx& lhs, const cplx& rhs) {
  if (lhs.real() != rhs.real()) return lhs.real() > rhs.real();
  return lhs.imag() > rhs.imag();
}

void sort_spectrum(std::vector<cplx>& values) {
  std::sort(values.begin(), values.end(), spectral_less);
}

namespace {

inline double sconj(double x) { return x; }
inline cplx sconj(cplx x) { return std::conj(x); }
inline double sreal(double x) { return x; }
inline double sreal(cplx x) { return x.real(); }

/// Householder tridiagonalization + implicit-shift QL, templated so real
/// symmetric input avoids complex arithmetic.  `a` is the row-major dense
/// Hermitian matrix (only its lower triangle is trusted); outputs are the
/// real diagonal `d`, real non-negative subdiagonal `e`, and optionally the
/// accumulated unitary `q` (columns are eigenvectors of the tridiagonal
/// problem pushed back to the original basis).
template <class S>
struct HermitianSolver {
  std::size_t n;
  std::vector<S> a;     // working copy, row-major
  std::vector<double> d, e;
  std::vector<S> q;     // row-major unitary accumulation
  bool want_vectors;
  int sweeps = 0;

  HermitianSolver(const ComplexMatrix& input, bool vectors)
      : n(input.rows()), a(n * n), d(n), e(n, 0.0), want_vectors(vectors) {
    // Symmetrize from the lower triangle so a defect within tolerance
    // cannot leak into the iteration.
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j <= i; ++j) {
        const cplx v = input(i, j);
        if constexpr (std::is_same_v<S, double>) {
          a[i * n + j] = v.real();
          a[j * n + i] = v.real();
        } else {
          a[i * n + j] = v;
          a[j * n + i] = std::conj(v);
        }
      }
      if constexpr (!std::is_same_v<S, double>) {
        a[i * n + i] = cplx{input(i, i).real(), 0.0};
      }
    }
  }

  void tridiagonalize() {
    std::vector<S> householder_alpha(n, S{});  // new subdiagonal values
    std::vector<double> beta(n, 0.0);
    std::vector<S> p(n), w(n);

    for (std::size_t k = 0; k + 2 < n; ++k) {
      double xnorm2 = 0.0;
      for (std::size_t i = k + 1; i < n; ++i) xnorm2 += std::norm(a[i * n + k]);
      const double xnorm = std::sqrt(xnorm2);
      const S x0 = a[(k + 1) * n + k];
      const double x0mag = std::abs(x0);
      if (xnorm == 0.0) {
        householder_alpha[k] = S{};
        beta[k] = 0.0;
        continue;
      }
      const S phase = x0mag == 0.0 ? S{1.0} : S(x0 / x0mag);
      householder_alpha[k] = -phase * xnorm;
      // v = x + phase * xnorm * e1, stored over the column below the
      // diagonal; ||v||^2 = 2 xnorm (xnorm + |x0|).
      a[(k + 1) * n + k] = x0 + phase * xnorm;
      const double vnorm2 = 2.0 * xnorm * (xnorm + x0mag);
      const double b = 2.0 / vnorm2;
      beta[k] = b;

      // p = beta * A v over the trailing block.
      for (std::size_t i = k + 1; i < n; ++i) {
        S acc{};
        const S* row = a.data() + i * n;
        for (std::size_t j = k + 1; j < n; ++j) {
          acc += row[j] * a[j * n + k];
        }
        p[i] = b * acc;
      }
      // w = p - (beta v^H p / 2) v ; v^H p is real for Hermitian A.
      double vhp = 0.0;
      for (std::size_t i = k + 1; i < n; ++i) {
        vhp += sreal(sconj(a[i * n + k]) * p[i]);
      }
      const double half_vhp = 0.5 * b * vhp;
      for (std::size_t i = k + 1; i < n; ++i) {
        w[i] = p[i] - half_vhp * a[i * n + k];
      }
      // A <- A - v w^H - w v^H on the trailing block.
      for (std::size_t i = k + 1; i < n; ++i) {
        const S vi = a[i * n + k];
        const S wi = w[i];
        S* row = a.data() + i * n;
        for (std::size_t j = k + 1; j < n; ++j) {
          row[j] -= vi * sconj(w[j]) + wi * sconj(a[j * n + k]);
        }
      }
    }

    // Accumulate Q before the stored reflectors are demoted to raw data.
    if (want_vectors) {
      q.assign(n * n, S{});
      for (std::size_t i = 0; i < n; ++i) q[i * n + i] = S{1.0};
      std::vector<S> t(n);
      for (std::size_t kk = n >= 2 ? n - 2 : 0; kk-- > 0;) {
        const std::size_t k = kk;
        if (beta[k] == 0.0) continue;
        // Q[k+1.., k+1..] <- (I - beta v v^H) Q[k+1.., k+1..]
        std::fill(t.begin() + k + 1, t.end(), S{});
        for (std::size_t i = k + 1; i < n; ++i) {
          const S vc = sconj(a[i * n + k]);
          const S* qrow = q.data() + i * n;
          for (std::size_t c = k + 1; c < n; ++c) t[c] += vc * qrow[c];
        }
        for (std::size_t i = k + 1; i < n; ++i) {
          const S vb = beta[k] * a[i * n + k];
          S* qrow = q.data() + i * n;
          for (std::size_t c = k + 1; c < n; ++c) qrow[c] -= vb * t[c];
        }
      }
    }

    // Extract d, e; make the subdiagonal real non-negative with a diagonal
    // phase similarity folded into Q's columns.
    for (std::size_t i = 0; i < n; ++i) d[i] = sreal(a[i * n + i]);
    if (n >= 2) {
      // The last reduction step leaves the (n-1, n-2) entry untouched by
      // any reflector, so read it from the working matrix.
      householder_alpha[n - 2] = a[(n - 1) * n + (n - 2)];
    }
    S phase_acc{1.0};
    for (std::size_t k = 0; k + 1 < n; ++k) {
      const S ec = householder_alpha[k];
      const double mag = std::abs(ec);
      e[k] = mag;
      if constexpr (!std::is_same_v<S, double>) {
        const S ph = mag == 0.0 ? S{1.0} : S(ec / mag);
        phase_acc *= ph;
        if (want_vectors) {
          for (std::size_t i = 0; i < n; ++i) {
            q[i * n + (k + 1)] *= phase_acc;
          }
        }
      } else {
        // Real path: fold the sign into the rotation-friendly form.
        const double sign = ec < 0.0 ? -1.0 : 1.0;
        phase_acc *= sign;
        if (want_vectors && phase_acc < 0.0) {
          for (std::size_t i = 0; i < n; ++i) q[i * n + (k + 1)] = -q[i * n + (k + 1)];
        }
      }
    }
  }

  /// Implicit-shift QL iteration on (d, e); rotations accumulated into q.
  void ql_iterate() {
    const std::size_t budget = 50 * std::max<std::size_t>(n, 1);
    std::size_t used = 0;
    std::vector<double> esq = e;  // subdiagonal, index k couples k and k+1
    esq.push_back(0.0);           // sentinel

    for (std::size_t l = 0; l < n; ++l) {
      for (;;) {
        std::size_t m = l;
        while (m + 1 < n) {
          // Negligibility in working precision: |e| vanishes next to the
          // neighboring diagonal mass.
          const double dd = std::abs(d[m]) + std::abs(d[m + 1]);
          if (std::abs(esq[m]) + dd == dd) break;
          ++m;
        }
        if (m == l) break;
        if (++used > budget) {
          throw solver_error("eig_hermitian: QL iteration budget exhausted");
        }
        ++sweeps;
        double g = (d[l + 1] - d[l]) / (2.0 * esq[l]);
        double r = std::hypot(g, 1.0);
        g = d[m] - d[l] + esq[l] / (g + std::copysign(r, g));
        double s = 1.0, c = 1.0, p = 0.0;
        bool underflow = false;
        for (std::size_t ii = m; ii-- > l;) {
          const std::size_t i = ii;
          double f = s * esq[i];
          const double b = c * esq[i];
          r = std::hypot(f, g);
          esq[i + 1] = r;
          if (r == 0.0) {
            d[i + 1] -= p;
            esq[m] = 0.0;
            underflow = true;
            break;
          }
          s = f / r;
          c = g / r;
          g = d[i + 1] - p;
          r = (d[i] - g) * s + 2.0 * c * b;
          p = s * r;
          d[i + 1] = g + p;
          g = c * r - b;
          if (want_vectors) {
            for (std::size_t row = 0; row < n; ++row) {
              S* qrow = q.data() + row * n;
              const S f2 = qrow[i + 1];
              qrow[i + 1] = s * qrow[i] + c * f2;
              qrow[i] = c * qrow[i] - s * f2;
            }
          }
        }
        if (underflow) continue;
        d[l] -= p;
        esq[l] = g;
        esq[m] = 0.0;
      }
    }
  }
};

template <class S>
Spectrum solve_hermitian(const ComplexMatrix& input, bool want_vectors) {
  const std::size_t n = input.rows();
  HermitianSolver<S> solver(input, want_vectors);
  solver.tridiagonalize();
  solver.ql_iterate();

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) {
    if (solver.d[x] != solver.d[y]) return solver.d[x] > solver.d[y];
    return x < y;
  });

  Spectrum out;
  out.eigenvalues.resize(n);
  out.iterations = solver.sweeps;
  for (std::size_t i = 0; i < n; ++i) {
    out.eigenvalues[i] = cplx{solver.d[order[i]], 0.0};
  }
  if (want_vectors) {
    ComplexMatrix vectors(n, n);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t jj = 0; jj < n; ++jj) {
        const std::size_t src = order[jj];
        if constexpr (std::is_same_v<S, double>) {
          vectors(i, jj) = cplx{solver.q[i * n + src], 0.0};
        } else {
          vectors(i, jj) = solver.q[i * n + src];
        }
      }
    }
    // Residual against the original input.
    double worst = 0.0;
    for (std::size_t jj = 0; jj < n; ++jj) {
      std::vector<cplx> v(n);
      for (std::size_t i = 0; i < n; ++i) v[i] = vectors(i, jj);
      std::vector<cplx> av = mat_vec(input, v);
      for (std::size_t i = 0; i < n; ++i) {
        av[i] -= out.eigenvalues[jj] * v[i];
      }
      worst = std::max(worst, vec_norm(av));
    }
    out.residual = worst;
    out.eigenvectors = std::move(vectors);
  }
  return out;
}

}  // namespace

Spectrum eig_hermitian(const ComplexMatrix& a, bool want_vectors) {
  if (!a.is_square()) {
    throw contract_error("eig_hermitian: matrix must be square");
  }
  a.require_finite("eig_hermitian");
  const double defect = a.hermitian_defect();
  const double scale = a.max_abs();
  if (defect > 1e-12 * std::max(scale, 1e-300)) {
    throw contract_error("eig_hermitian: input is not Hermitian");
  }
  bool real_input = true;
  for (std::size_t i = 0; i < a.rows() && real_input; ++i) {
    const cplx* row = a.row(i);
    for (std::size_t j = 0; j < a.cols(); ++j) {
      if (row[j].imag() != 0.0) {
        real_input = false;
        break;
      }
    }
  }
  return real_input ? solve_hermitian<double>(a, want_vectors)
                    : solve_hermitian<cplx>(a, want_vectors);
}

EigenPair eigenvector_for(const ComplexMatrix& a, cplx lambda, double tol) {
  if (!a.is_square()) {
    throw contract_error("eigenvector_for: matrix must be square");
  }
  const std::size_t n = a.rows();
  const double scale = std::max(1.0, frobenius_norm(a));

  std::vector<cplx> v(n);
  for (std::size_t i = 0; i < n; ++i) {
    v[i] = cplx{1.0, 0.125 * static_cast<double>(i % 7)};
  }
  double nv = vec_norm(v);
  for (auto& c : v) c /= nv;

  cplx mu = lambda;
  double residual = std::numeric_limits<double>::infinity();
  constexpr int kMaxRefinements = 8;
  for (int it = 0; it < kMaxRefinements; ++it) {
    std::vector<cplx> x;
    try {
      x = resolvent_apply(a, mu, v);
    } catch (const solver_error&) {
      // mu is numerically exact; nudge off the spectrum and retry.
      mu += cplx{0.0, 1e-13 * (1.0 + std::abs(mu))};
      x = resolvent_apply(a, mu, v);
    }
    const double nx = vec_norm(x);
    if (nx == 0.0) {
      throw solver_error("eigenvector_for: inverse iteration collapsed");
    }
    for (auto& c : x) c /= nx;
    v = std::move(x);

    // Canonical phase: largest-magnitude coordinate rotated positive real.
    std::size_t arg = 0;
    for (std::size_t i = 1; i < n; ++i) {
      if (std::abs(v[i]) > std::abs(v[arg])) arg = i;
    }
    const cplx pivot = v[arg];
    const cplx rot = std::conj(pivot) / std::abs(pivot);
    for (auto& c : v) c *= rot;

    const std::vector<cplx> av = mat_vec(a, v);
    const cplx rayleigh = dot(v, av);
    std::vector<cplx> r = av;
    for (std::size_t i = 0; i < n; ++i) r[i] -= rayleigh * v[i];
    residual = vec_norm(r);
    mu = rayleigh;
    if (residual <= tol * scale) {
      return EigenPair{mu, std::move(v), residual};
    }
  }
  throw solver_error("eigenvector_for: residual gate not met");
}

}  // namespace nearherm
