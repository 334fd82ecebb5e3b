#pragma once

// Shifted log-determinants and eigenvalues of Hermitian band matrices.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <limits>
#include <numbers>
#include <vector>

#include <Eigen/Dense>

#include "rbmlab/core/errors.hpp"
#include "rbmlab/ensembles.hpp"

namespace rbmlab {

/// det = exp(log_abs) * phase with |phase| = 1.
struct LogDet {
  double log_abs = 0.0;
  std::complex<double> phase{1.0, 0.0};

  [[nodiscard]] std::complex<double> value() const { return std::exp(log_abs) * phase; }
};

struct SpectrumReal {
  std::vector<double> values;  // ascending
};

namespace detail {

inline double pivot_floor(const HermitianBandMatrix& h, std::complex<double> z) {
  return 64.0 * std::numeric_limits<double>::epsilon() * (h.max_abs() + std::abs(z));
}

// LDL^H of H - z for real z. Pivots of a Hermitian matrix are real, so the
// phase is a sign.
inline LogDet logdet_real_shift(const HermitianBandMatrix& h, double z) {
  const std::size_t n = h.size();
  const std::size_t b = h.half_bandwidth();
  const std::size_t w = b + 1;
  std::vector<double> re(n * w);
  std::vector<double> im(n * w);
  for (std::size_t j = 0; j < n; ++j)
    for (std::size_t d = 0; d < w; ++d) {
      re[j * w + d] = h.upper(j, d).real();
      im[j * w + d] = h.upper(j, d).imag();
    }
  for (std::size_t j = 0; j < n; ++j) re[j * w] -= z;

  const double floor = pivot_floor(h, z);
  double log_abs = 0.0;
  bool negative = false;
  for (std::size_t k = 0; k < n; ++k) {
    const double piv = re[k * w];
    if (!(std::fabs(piv) >= floor)) throw SingularPivotError(k, std::fabs(piv));
    log_abs += std::log(std::fabs(piv));
    negative ^= (piv < 0.0);
    const double inv = 1.0 / piv;
    const std::size_t reach = std::min(b, n - 1 - k);
    const double* kr = &re[k * w];
    const double* ki = &im[k * w];
    for (std::size_t i = 1; i <= reach; ++i) {
      // coefficient conj(a_i) / piv
      const double cr = kr[i] * inv;
      const double ci = -ki[i] * inv;
      double* rr = &re[(k + i) * w];
      double* ri = &im[(k + i) * w];
      for (std::size_t j = i; j <= reach; ++j) {
        rr[j - i] -= cr * kr[j] - ci * ki[j];
        ri[j - i] -= cr * ki[j] + ci * kr[j];
      }
    }
  }
  return {log_abs, {negative ? -1.0 : 1.0, 0.0}};
}

// Band LU without pivoting of H - z for Im z != 0. Rows are stored with the
// full width 2b+1; real and imaginary parts are kept in separate arrays.
inline LogDet logdet_complex_shift(const HermitianBandMatrix& h, std::complex<double> z) {
  const std::size_t n = h.size();
  const std::size_t b = h.half_bandwidth();
  const std::size_t w = 2 * b + 1;
  std::vector<double> re(n * w, 0.0);
  std::vector<double> im(n * w, 0.0);
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t d = 0; d <= b && j + d < n; ++d) {
      const auto v = h.upper(j, d);
      re[j * w + b + d] = v.real();
      im[j * w + b + d] = v.imag();
      if (d > 0) {
        re[(j + d) * w + b - d] = v.real();
        im[(j + d) * w + b - d] = -v.imag();
      }
    }
    re[j * w + b] -= z.real();
    im[j * w + b] -= z.imag();
  }

  const double floor = pivot_floor(h, z);
  double log_abs = 0.0;
  double arg = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    const double pr = re[k * w + b];
    const double pi = im[k * w + b];
    const double mag = std::hypot(pr, pi);
    if (!(mag >= floor)) throw SingularPivotError(k, mag);
    log_abs += std::log(mag);
    arg += std::atan2(pi, pr);
    const double den = 1.0 / (pr * pr + pi * pi);
    const double qr = pr * den;
    const double qi = -pi * den;
    const std::size_t reach = std::min(b, n - 1 - k);
    const double* ur = &re[k * w + b];
    const double* ui = &im[k * w + b];
    for (std::size_t i = 1; i <= reach; ++i) {
      double* rr = &re[(k + i) * w + b - i];
      double* ri = &im[(k + i) * w + b - i];
      const double lr = rr[0] * qr - ri[0] * qi;
      const double li = rr[0] * qi + ri[0] * qr;
      for (std::size_t j = 1; j <= reach; ++j) {
        rr[j] -= lr * ur[j] - li * ui[j];
        ri[j] -= lr * ui[j] + li * ur[j];
      }
    }
  }
  return {log_abs, std::polar(1.0, std::remainder(arg, 2.0 * std::numbers::pi))};
}

}  // namespace detail

/// log det(H - z) by a band factorization without pivoting.
///
/// Real shifts use LDL^H and return phase +-1 exactly; complex shifts use a
/// general band LU, whose pivots stay at least |Im z| away from zero. A pivot
/// below 64 eps (max|H| + |z|) raises SingularPivotError.
[[nodiscard]] inline LogDet shifted_logdet(const HermitianBandMatrix& h, std::complex<double> z) {
  if (z.imag() == 0.0) return detail::logdet_real_shift(h, z.real());
  return detail::logdet_complex_shift(h, z);
}

namespace detail {

// Lower band of a Hermitian matrix with room for bulges twice the bandwidth.
class BulgeBand {
 public:
  BulgeBand(const HermitianBandMatrix& h)
      : n_(h.size()), kd_(2 * h.half_bandwidth()), data_(n_ * (kd_ + 1)) {
    const std::size_t b = h.half_bandwidth();
    for (std::size_t j = 0; j < n_; ++j)
      for (std::size_t d = 0; d <= b && j + d < n_; ++d) at(j + d, j) = std::conj(h.upper(j, d));
  }

  // Entry (i, j) with i >= j and i - j <= 2b.
  std::complex<double>& at(std::size_t i, std::size_t j) noexcept {
    return data_[j * (kd_ + 1) + (i - j)];
  }

 private:
  std::size_t n_;
  std::size_t kd_;
  std::vector<std::complex<double>> data_;
};

inline std::complex<double> cmul(std::complex<double> a, std::complex<double> b) noexcept {
  return {a.real() * b.real() - a.imag() * b.imag(), a.real() * b.imag() + a.imag() * b.real()};
}

inline std::complex<double> cjmul(std::complex<double> a, std::complex<double> b) noexcept {
  // conj(a) * b
  return {a.real() * b.real() + a.imag() * b.imag(), a.real() * b.imag() - a.imag() * b.real()};
}

// One Householder step of the band-to-tridiagonal sweep. The reflector is
// built from column c0 over rows [rs, re) and applied as H A H.
inline void reflect_block(BulgeBand& a, std::size_t n, std::size_t b, std::size_t c0,
                          std::size_t rs, std::size_t re, std::vector<std::complex<double>>& v,
                          std::vector<std::complex<double>>& p) {
  const std::size_t m = re - rs;
  v.assign(m, {});
  double tail = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    v[i] = a.at(rs + i, c0);
    if (i > 0) tail += std::norm(v[i]);
  }
  if (tail == 0.0) return;
  const double alpha_abs = std::abs(v[0]);
  const double norm = std::sqrt(alpha_abs * alpha_abs + tail);
  const std::complex<double> unit = alpha_abs > 0.0 ? v[0] / alpha_abs : std::complex<double>{1.0};
  const std::complex<double> beta = -unit * norm;
  v[0] -= beta;
  double vnorm2 = std::norm(v[0]) + tail;
  const double tau = 2.0 / vnorm2;

  // Column c0 becomes (beta, 0, ..., 0).
  a.at(rs, c0) = beta;
  for (std::size_t i = 1; i < m; ++i) a.at(rs + i, c0) = {};

  // Left application to the remaining columns in [c0 + 1, rs).
  for (std::size_t j = c0 + 1; j < rs; ++j) {
    std::complex<double> s{};
    for (std::size_t i = 0; i < m; ++i) s += cjmul(v[i], a.at(rs + i, j));
    s *= tau;
    for (std::size_t i = 0; i < m; ++i) a.at(rs + i, j) -= cmul(s, v[i]);
  }

  // Two-sided update of the diagonal block. p = tau A v.
  auto get = [&](std::size_t i, std::size_t j) {
    return i >= j ? a.at(rs + i, rs + j) : std::conj(a.at(rs + j, rs + i));
  };
  p.assign(m, {});
  for (std::size_t i = 0; i < m; ++i) {
    std::complex<double> s{};
    for (std::size_t j = 0; j < m; ++j) s += cmul(get(i, j), v[j]);
    p[i] = tau * s;
  }
  std::complex<double> vp{};
  for (std::size_t i = 0; i < m; ++i) vp += cjmul(v[i], p[i]);
  const double k = 0.5 * tau * vp.real();
  for (std::size_t i = 0; i < m; ++i) p[i] -= k * v[i];
  for (std::size_t j = 0; j < m; ++j)
    for (std::size_t i = j; i < m; ++i)
      a.at(rs + i, rs + j) -= cmul(v[i], std::conj(p[j])) + cmul(p[i], std::conj(v[j]));
  for (std::size_t i = 0; i < m; ++i) {
    auto& d = a.at(rs + i, rs + i);
    d = {d.real(), 0.0};
  }

  // Right application to the rows below the block.
  const std::size_t lim = std::min(n, re + b);
  for (std::size_t i = re; i < lim; ++i) {
    std::complex<double> s{};
    for (std::size_t j = 0; j < m; ++j) s += cmul(a.at(i, rs + j), v[j]);
    s *= tau;
    for (std::size_t j = 0; j < m; ++j) a.at(i, rs + j) -= cmul(s, std::conj(v[j]));
  }
}

// Implicit-shift QL on a real symmetric tridiagonal matrix.
inline void tridiagonal_ql(std::vector<double>& d, std::vector<double>& e) {
  const std::size_t n = d.size();
  if (n == 0) return;
  e.resize(n, 0.0);
  for (std::size_t l = 0; l < n; ++l) {
    int iter = 0;
    std::size_t m = l;
    for (;;) {
      for (m = l; m + 1 < n; ++m) {
        const double dd = std::fabs(d[m]) + std::fabs(d[m + 1]);
        if (std::fabs(e[m]) <= std::numeric_limits<double>::epsilon() * dd) break;
      }
      if (m == l) break;
      if (++iter > 50)
        throw ConvergenceError("tridiagonal QL: no convergence for eigenvalue " + std::to_string(l) +
                               " after 50 iterations");
      double g = (d[l + 1] - d[l]) / (2.0 * e[l]);
      double r = std::hypot(g, 1.0);
      g = d[m] - d[l] + e[l] / (g + std::copysign(r, g));
      double s = 1.0;
      double c = 1.0;
      double p = 0.0;
      bool underflow = false;
      for (std::size_t i = m; i-- > l;) {
        double f = s * e[i];
        const double bb = c * e[i];
        r = std::hypot(f, g);
        e[i + 1] = r;
        if (r == 0.0) {
          d[i + 1] -= p;
          e[m] = 0.0;
          underflow = true;
          break;
        }
        s = f / r;
        c = g / r;
        g = d[i + 1] - p;
        r = (d[i] - g) * s + 2.0 * c * bb;
        p = s * r;
        d[i + 1] = g + p;
        g = c * r - bb;
      }
      if (underflow) continue;
      d[l] -= p;
      e[l] = g;
      e[m] = 0.0;
    }
  }
}

}  // namespace detail

/// All eigenvalues of a Hermitian band matrix, ascending.
///
/// The band is reduced to real tridiagonal form by Householder reflections
/// with bulge chasing (one column per sweep), then solved by implicit-shift
/// QL with at most 50 iterations per eigenvalue. When the band covers more
/// than a quarter of the matrix the dense Householder tridiagonalization of
/// Eigen is used instead, which is faster at that fill.
[[nodiscard]] inline SpectrumReal eigenvalues(const HermitianBandMatrix& h) {
  const std::size_t n = h.size();
  const std::size_t b = h.half_bandwidth();
  std::vector<double> d(n);
  std::vector<double> e(n, 0.0);

  if (b >= 2 && 4 * b >= n && n > 32) {
    Eigen::MatrixXcd dense(n, n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        dense(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = h(i, j);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(dense, Eigen::EigenvaluesOnly);
    if (solver.info() != Eigen::Success)
      throw ConvergenceError("dense Hermitian eigensolver did not converge");
    SpectrumReal out;
    out.values.assign(solver.eigenvalues().data(), solver.eigenvalues().data() + n);
    return out;
  }

  if (b >= 2) {
    detail::BulgeBand a(h);
    std::vector<std::complex<double>> v;
    std::vector<std::complex<double>> p;
    for (std::size_t c = 0; c + 2 < n; ++c) {
      std::size_t c0 = c;
      std::size_t rs = c + 1;
      std::size_t re = std::min(rs + b, n);
      while (re - rs >= 2) {
        detail::reflect_block(a, n, b, c0, rs, re, v, p);
        c0 = rs;
        rs = re;
        re = std::min(rs + b, n);
      }
    }
    for (std::size_t i = 0; i < n; ++i) {
      d[i] = a.at(i, i).real();
      if (i + 1 < n) e[i] = std::abs(a.at(i + 1, i));
    }
  } else {
    for (std::size_t i = 0; i < n; ++i) {
      d[i] = h.upper(i, 0).real();
      if (b == 1 && i + 1 < n) e[i] = std::abs(h.upper(i, 1));
    }
  }
  detail::tridiagonal_ql(d, e);
  std::sort(d.begin(), d.end());
  return {std::move(d)};
}

}  // namespace rbmlab
