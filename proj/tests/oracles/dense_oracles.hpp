#pragma once

// Textbook O(N^3) references used as the other side of the band-solver
// equalities. They share no code with the library.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <vector>

namespace oracle {

using cd = std::complex<double>;
using DenseMatrix = std::vector<std::vector<cd>>;

struct DenseLogDet {
  double log_abs = 0.0;
  cd phase{1.0, 0.0};
};

// Gaussian elimination with partial pivoting.
inline DenseLogDet dense_logdet(DenseMatrix a) {
  const std::size_t n = a.size();
  DenseLogDet out;
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t p = k;
    for (std::size_t i = k + 1; i < n; ++i)
      if (std::abs(a[i][k]) > std::abs(a[p][k])) p = i;
    if (p != k) {
      std::swap(a[p], a[k]);
      out.phase = -out.phase;
    }
    const cd piv = a[k][k];
    out.log_abs += std::log(std::abs(piv));
    out.phase *= piv / std::abs(piv);
    for (std::size_t i = k + 1; i < n; ++i) {
      const cd l = a[i][k] / piv;
      for (std::size_t j = k; j < n; ++j) a[i][j] -= l * a[k][j];
    }
  }
  return out;
}

// Cyclic Jacobi for complex Hermitian matrices. Each rotation zeroes one
// off-diagonal pair exactly; sweeps continue until the off-diagonal norm is
// negligible.
inline std::vector<double> dense_eigenvalues(DenseMatrix a) {
  const std::size_t n = a.size();
  for (int sweep = 0; sweep < 100; ++sweep) {
    double off = 0.0;
    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) {
        total += std::norm(a[i][j]);
        if (i != j) off += std::norm(a[i][j]);
      }
    if (off <= 1e-30 * total) break;
    for (std::size_t p = 0; p < n; ++p)
      for (std::size_t q = p + 1; q < n; ++q) {
        const double mag = std::abs(a[p][q]);
        if (mag == 0.0) continue;
        // Remove the phase of a_pq, then rotate as in the real case.
        const cd u = a[p][q] / mag;
        const double app = a[p][p].real();
        const double aqq = a[q][q].real();
        const double theta = 0.5 * std::atan2(2.0 * mag, aqq - app);
        const double c = std::cos(theta);
        const double s = std::sin(theta);
        // Columns: new_p = c col_p - s conj(u) col_q, new_q = s u col_p + c col_q
        for (std::size_t k = 0; k < n; ++k) {
          const cd kp = a[k][p];
          const cd kq = a[k][q];
          a[k][p] = c * kp - s * std::conj(u) * kq;
          a[k][q] = s * u * kp + c * kq;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const cd pk = a[p][k];
          const cd qk = a[q][k];
          a[p][k] = c * pk - s * u * qk;
          a[q][k] = s * std::conj(u) * pk + c * qk;
        }
        a[p][q] = a[q][p] = 0.0;
      }
  }
  std::vector<double> ev(n);
  for (std::size_t i = 0; i < n; ++i) ev[i] = a[i][i].real();
  std::sort(ev.begin(), ev.end());
  return ev;
}

// Adaptive Simpson on [a, b].
template <class F>
double adaptive_simpson(F&& f, double a, double b, double tol, int depth = 40) {
  auto simpson = [&](double lo, double hi, double flo, double fmid, double fhi) {
    return (hi - lo) / 6.0 * (flo + 4.0 * fmid + fhi);
  };
  struct Rec {
    static double run(F& f, double lo, double hi, double flo, double fmid, double fhi,
                      double whole, double tol, int depth, decltype(simpson)& s) {
      const double mid = 0.5 * (lo + hi);
      const double lm = 0.5 * (lo + mid);
      const double rm = 0.5 * (mid + hi);
      const double flm = f(lm);
      const double frm = f(rm);
      const double left = s(lo, mid, flo, flm, fmid);
      const double right = s(mid, hi, fmid, frm, fhi);
      if (depth <= 0 || std::fabs(left + right - whole) <= 15.0 * tol)
        return left + right + (left + right - whole) / 15.0;
      return run(f, lo, mid, flo, flm, fmid, left, 0.5 * tol, depth - 1, s) +
             run(f, mid, hi, fmid, frm, fhi, right, 0.5 * tol, depth - 1, s);
    }
  };
  const double fa = f(a);
  const double fb = f(b);
  const double fm = f(0.5 * (a + b));
  return Rec::run(f, a, b, fa, fm, fb, simpson(a, b, fa, fm, fb), tol, depth, simpson);
}

}  // namespace oracle
