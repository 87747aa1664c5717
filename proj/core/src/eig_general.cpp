#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "nearherm/eig.hpp"

namespace nearherm {

namespace {

// The dense nonsymmetric solver keeps the matrix in split re/im planes so
// every hot loop is a contiguous double loop the compiler can vectorize.
struct GeneralSolver {
  std::size_t n;
  std::vector<double> hr, hi;  // row-major planes
  int sweeps = 0;
  double norm1 = 0.0;  // max column abs1-sum, for deflation floors

  static double cabs1(double re, double im) {
    return std::abs(re) + std::abs(im);
  }

  explicit GeneralSolver(const ComplexMatrix& a)
      : n(a.rows()), hr(n * n), hi(n * n) {
    for (std::size_t i = 0; i < n; ++i) {
      const cplx* row = a.row(i);
      double* rr = hr.data() + i * n;
      double* ri = hi.data() + i * n;
      for (std::size_t j = 0; j < n; ++j) {
        rr[j] = row[j].real();
        ri[j] = row[j].imag();
      }
    }
  }

  // ---- Householder reduction to upper Hessenberg form ----
  void hessenberg() {
    if (n < 3) return;
    std::vector<double> vr(n), vi(n), tr(n), ti(n), ur(n), ui(n);
    for (std::size_t k = 0; k + 2 < n; ++k) {
      const std::size_t base = k + 1;
      const std::size_t len = n - base;
      double xnorm2 = 0.0;
      for (std::size_t i = 0; i < len; ++i) {
        const std::size_t idx = (base + i) * n + k;
        vr[i] = hr[idx];
        vi[i] = hi[idx];
        xnorm2 += vr[i] * vr[i] + vi[i] * vi[i];
      }
      const double xnorm = std::sqrt(xnorm2);
      if (xnorm == 0.0) continue;
      const double x0r = vr[0], x0i = vi[0];
      const double x0mag = std::sqrt(x0r * x0r + x0i * x0i);
      double phr = 1.0, phi = 0.0;
      if (x0mag > 0.0) {
        phr = x0r / x0mag;
        phi = x0i / x0mag;
      }
      // v = x + phase * ||x|| e1;  beta = 2/||v||^2 = 1/(||x||(||x||+|x0|)).
      vr[0] += phr * xnorm;
      vi[0] += phi * xnorm;
      const double beta = 1.0 / (xnorm * (xnorm + x0mag));

      // Column k collapses to -phase*||x|| with zeros below.
      hr[base * n + k] = -phr * xnorm;
      hi[base * n + k] = -phi * xnorm;
      for (std::size_t i = 1; i < len; ++i) {
        hr[(base + i) * n + k] = 0.0;
        hi[(base + i) * n + k] = 0.0;
      }

      // Left update on rows base..n-1, cols base..n-1:
      //   t = v^H H,  H -= beta v t.
      std::fill(tr.begin() + base, tr.end(), 0.0);
      std::fill(ti.begin() + base, ti.end(), 0.0);
      for (std::size_t i = 0; i < len; ++i) {
        const double ar = vr[i], ai = vi[i];
        const double* rr = hr.data() + (base + i) * n;
        const double* ri = hi.data() + (base + i) * n;
        for (std::size_t j = base; j < n; ++j) {
          tr[j] += ar * rr[j] + ai * ri[j];
          ti[j] += ar * ri[j] - ai * rr[j];
        }
      }
      for (std::size_t i = 0; i < len; ++i) {
        const double br = beta * vr[i], bi = beta * vi[i];
        double* rr = hr.data() + (base + i) * n;
        double* ri = hi.data() + (base + i) * n;
        for (std::size_t j = base; j < n; ++j) {
          rr[j] -= br * tr[j] - bi * ti[j];
          ri[j] -= br * ti[j] + bi * tr[j];
        }
      }

      // Right update on all rows, cols base..n-1:
      //   u = H v,  H -= beta u v^H.
      for (std::size_t i = 0; i < n; ++i) {
        const double* rr = hr.data() + i * n;
        const double* ri = hi.data() + i * n;
        double accr = 0.0, acci = 0.0;
        for (std::size_t j = 0; j < len; ++j) {
          accr += rr[base + j] * vr[j] - ri[base + j] * vi[j];
          acci += rr[base + j] * vi[j] + ri[base + j] * vr[j];
        }
        ur[i] = beta * accr;
        ui[i] = beta * acci;
      }
      for (std::size_t i = 0; i < n; ++i) {
        const double ar = ur[i], ai = ui[i];
        double* rr = hr.data() + i * n;
        double* ri = hi.data() + i * n;
        for (std::size_t j = 0; j < len; ++j) {
          // u * conj(v)
          rr[base + j] -= ar * vr[j] + ai * vi[j];
          ri[base + j] -= ai * vr[j] - ar * vi[j];
        }
      }
    }
  }

  void compute_norm1() {
    std::vector<double> col(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
      const std::size_t jlo = i == 0 ? 0 : i - 1;
      for (std::size_t j = jlo; j < n; ++j) {
        col[j] += cabs1(hr[i * n + j], hi[i * n + j]);
      }
    }
    norm1 = *std::max_element(col.begin(), col.end());
  }

  // Complex Givens rotation G = [[c, s], [-conj(s), c]] with real c >= 0
  // mapping (a, b) to (r, 0).
  struct Givens {
    double c;
    double sr, si;
  };
  static Givens make_givens(double ar, double ai, double br, double bi,
                            double& rr, double& ri) {
    const double na = std::hypot(ar, ai);
    const double nb = std::hypot(br, bi);
    if (nb == 0.0) {
      rr = ar;
      ri = ai;
      return {1.0, 0.0, 0.0};
    }
    if (na == 0.0) {
      rr = nb;
      ri = 0.0;
      return {0.0, br / nb, -bi / nb};
    }
    const double h = std::hypot(na, nb);
    const double c = na / h;
    const double par = ar / na, pai = ai / na;  // phase of a
    // s = phase(a) * conj(b) / h
    const double sr = (par * br + pai * bi) / h;
    const double si = (pai * br - par * bi) / h;
    rr = par * h;
    ri = pai * h;
    return {c, sr, si};
  }

  // Eigenvalues of the 2x2 block [[a, b], [c, d]].
  static std::pair<cplx, cplx> eig2(cplx a, cplx b, cplx c, cplx d) {
    const cplx mid = 0.5 * (a + d);
    const cplx disc = std::sqrt(mid * mid - (a * d - b * c));
    return {mid + disc, mid - disc};
  }

  cplx at(std::size_t i, std::size_t j) const {
    return cplx{hr[i * n + j], hi[i * n + j]};
  }

  // One implicit single-shift QR sweep on the active window [l, m]
  // (inclusive).  Rotations are generated sequentially against a local
  // chunk-aligned block and the long row/column tails are replayed in
  // cache-friendly deferred passes; the result is exactly the sequential
  // bulge chase.
  void sweep(std::size_t l, std::size_t m, cplx sigma) {
    constexpr std::size_t kChunk = 48;
    const std::size_t count = m - l;  // rotations in the sweep
    std::vector<double> cs(count), snr(count), sni(count);

    std::size_t q0 = l;
    while (q0 < m) {
      const std::size_t q1 = std::min(q0 + kChunk, m);  // rotations [q0, q1)
      const std::size_t local_edge = std::min(q1 + 1, m);

      // Phase A: generate rotations; apply inside the diagonal block.
      for (std::size_t k = q0; k < q1; ++k) {
        double ar, ai, br, bi;
        if (k == l) {
          ar = hr[l * n + l] - sigma.real();
          ai = hi[l * n + l] - sigma.imag();
          br = hr[(l + 1) * n + l];
          bi = hi[(l + 1) * n + l];
        } else {
          ar = hr[k * n + (k - 1)];
          ai = hi[k * n + (k - 1)];
          br = hr[(k + 1) * n + (k - 1)];
          bi = hi[(k + 1) * n + (k - 1)];
        }
        double rr, ri;
        const Givens g = make_givens(ar, ai, br, bi, rr, ri);
        cs[k - l] = g.c;
        snr[k - l] = g.sr;
        sni[k - l] = g.si;
        if (k > l) {
          hr[k * n + (k - 1)] = rr;
          hi[k * n + (k - 1)] = ri;
          hr[(k + 1) * n + (k - 1)] = 0.0;
          hi[(k + 1) * n + (k - 1)] = 0.0;
        }

        // Left rotation on rows k, k+1 over the local columns.
        {
          const std::size_t jlo = k == l ? l : k;
          double* xr = hr.data() + k * n;
          double* xi = hi.data() + k * n;
          double* yr = hr.data() + (k + 1) * n;
          double* yi = hi.data() + (k + 1) * n;
          const double c = g.c, sr_ = g.sr, si_ = g.si;
          for (std::size_t j = jlo; j <= local_edge; ++j) {
            const double axr = xr[j], axi = xi[j];
            const double ayr = yr[j], ayi = yi[j];
            xr[j] = c * axr + sr_ * ayr - si_ * ayi;
            xi[j] = c * axi + sr_ * ayi + si_ * ayr;
            yr[j] = -(sr_ * axr + si_ * axi) + c * ayr;
            yi[j] = -(sr_ * axi - si_ * axr) + c * ayi;
          }
        }
        // Right rotation on cols k, k+1 over the local rows.
        {
          const std::size_t ilo = q0 == l ? l : q0 - 1;
          const std::size_t ihi = std::min(k + 2, m);
          const double c = g.c, sr_ = g.sr, si_ = g.si;
          for (std::size_t i = ilo; i <= ihi; ++i) {
            double* rr_ = hr.data() + i * n;
            double* ri_ = hi.data() + i * n;
            const double axr = rr_[k], axi = ri_[k];
            const double ayr = rr_[k + 1], ayi = ri_[k + 1];
            rr_[k] = c * axr + sr_ * ayr + si_ * ayi;
            ri_[k] = c * axi + sr_ * ayi - si_ * ayr;
            rr_[k + 1] = -(sr_ * axr - si_ * axi) + c * ayr;
            ri_[k + 1] = -(sr_ * axi + si_ * axr) + c * ayi;
          }
        }
      }

      // Phase B: deferred left tails, rows k/k+1 over cols > local_edge.
      for (std::size_t k = q0; k < q1; ++k) {
        if (local_edge + 1 > m) break;
        const double c = cs[k - l], sr_ = snr[k - l], si_ = sni[k - l];
        double* xr = hr.data() + k * n;
        double* xi = hi.data() + k * n;
        double* yr = hr.data() + (k + 1) * n;
        double* yi = hi.data() + (k + 1) * n;
        for (std::size_t j = local_edge + 1; j <= m; ++j) {
          const double axr = xr[j], axi = xi[j];
          const double ayr = yr[j], ayi = yi[j];
          xr[j] = c * axr + sr_ * ayr - si_ * ayi;
          xi[j] = c * axi + sr_ * ayi + si_ * ayr;
          yr[j] = -(sr_ * axr + si_ * axi) + c * ayr;
          yi[j] = -(sr_ * axi - si_ * axr) + c * ayi;
        }
      }

      // Phase C: deferred right tails, cols k/k+1 over rows above the
      // block, streamed row by row.
      if (q0 >= l + 2) {
        for (std::size_t i = l; i + 2 <= q0; ++i) {
          double* rr_ = hr.data() + i * n;
          double* ri_ = hi.data() + i * n;
          for (std::size_t k = q0; k < q1; ++k) {
            const double c = cs[k - l], sr_ = snr[k - l], si_ = sni[k - l];
            const double axr = rr_[k], axi = ri_[k];
            const double ayr = rr_[k + 1], ayi = ri_[k + 1];
            rr_[k] = c * axr + sr_ * ayr + si_ * ayi;
            ri_[k] = c * axi + sr_ * ayi - si_ * ayr;
            rr_[k + 1] = -(sr_ * axr - si_ * axi) + c * ayr;
            ri_[k + 1] = -(sr_ * axi + si_ * axr) + c * ayi;
          }
        }
      }

      q0 = q1;
    }
  }

  std::vector<cplx> iterate() {
    std::vector<cplx> eigs;
    eigs.reserve(n);
    if (n == 0) return eigs;
    if (n == 1) {
      eigs.push_back(at(0, 0));
      return eigs;
    }
    compute_norm1();

    const double ulp = std::numeric_limits<double>::epsilon();
    const double smlnum = std::numeric_limits<double>::min() *
                          (static_cast<double>(n) / ulp);
    const int budget = 30 * static_cast<int>(n);
    std::size_t hi_idx = n - 1;
    int since_deflation = 0;

    while (true) {
      // Find the active block [l, hi_idx], zeroing negligible subdiagonals.
      std::size_t l = 0;
      for (std::size_t i = hi_idx; i >= 1; --i) {
        const double sub = cabs1(hr[i * n + (i - 1)], hi[i * n + (i - 1)]);
        double tst =
            cabs1(hr[(i - 1) * n + (i - 1)], hi[(i - 1) * n + (i - 1)]) +
            cabs1(hr[i * n + i], hi[i * n + i]);
        if (tst == 0.0) tst = norm1;
        if (sub <= std::max(ulp * tst, smlnum)) {
          hr[i * n + (i - 1)] = 0.0;
          hi[i * n + (i - 1)] = 0.0;
          l = i;
          break;
        }
      }

      if (l == hi_idx) {
        eigs.push_back(at(hi_idx, hi_idx));
        if (hi_idx == 0) break;
        --hi_idx;
        since_deflation = 0;
        continue;
      }
      if (l + 1 == hi_idx) {
        const auto [e1, e2] = eig2(at(l, l), at(l, hi_idx), at(hi_idx, l),
                                   at(hi_idx, hi_idx));
        eigs.push_back(e1);
        eigs.push_back(e2);
        if (l == 0) break;
        hi_idx = l - 1;
        since_deflation = 0;
        continue;
      }

      if (sweeps >= budget) {
        throw solver_error(
            "eig_general: QR sweep budget (30n) exhausted before "
            "convergence");
      }

      // Shift selection: Wilkinson from the trailing 2x2; periodically an
      // exceptional shift to break resonant cycles.
      cplx sigma;
      ++since_deflation;
      if (since_deflation % 20 == 0) {
        sigma = at(hi_idx, hi_idx) +
                0.75 * cabs1(hr[hi_idx * n + hi_idx - 1],
                             hi[hi_idx * n + hi_idx - 1]);
      } else {
        const auto [e1, e2] =
            eig2(at(hi_idx - 1, hi_idx - 1), at(hi_idx - 1, hi_idx),
                 at(hi_idx, hi_idx - 1), at(hi_idx, hi_idx));
        const cplx corner = at(hi_idx, hi_idx);
        sigma = std::abs(e1 - corner) <= std::abs(e2 - corner) ? e1 : e2;
      }

      ++sweeps;
      sweep(l, hi_idx, sigma);
    }
    return eigs;
  }
};

}  // namespace

Spectrum eig_general(const ComplexMatrix& a) {
  if (!a.is_square()) {
    throw contract_error("eig_general: matrix must be square");
  }
  a.require_finite("eig_general");

  GeneralSolver solver(a);
  solver.hessenberg();
  Spectrum out;
  out.eigenvalues = solver.iterate();
  out.iterations = solver.sweeps;
  sort_spectrum(out.eigenvalues);
  return out;
}

}  // namespace nearherm
