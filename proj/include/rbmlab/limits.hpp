#pragma once

// Closed-form limits of the crossover and the sigma-model correlators, and
// the assembly of the two-point function from the generalized correlators.

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <functional>
#include <limits>
#include <numbers>
#include <vector>

#include "rbmlab/core/errors.hpp"

namespace rbmlab {

/// Semicircle density sqrt(4 - E^2) / (2 pi), zero outside [-2, 2].
[[nodiscard]] inline double rho_sc(double e) {
  const double s = 4.0 - e * e;
  return s > 0.0 ? std::sqrt(s) / (2.0 * std::numbers::pi) : 0.0;
}

/// Distribution function of the semicircle.
[[nodiscard]] inline double semicircle_cdf(double e) {
  if (e <= -2.0) return 0.0;
  if (e >= 2.0) return 1.0;
  return 0.5 + e * std::sqrt(4.0 - e * e) / (4.0 * std::numbers::pi) +
         std::asin(0.5 * e) / std::numbers::pi;
}

/// (-E + i sqrt(4 - E^2)) / 2.
[[nodiscard]] inline std::complex<double> g_plus(double e) {
  require(std::fabs(e) <= 2.0, "g_plus: need |E| <= 2");
  return {-0.5 * e, 0.5 * std::sqrt(4.0 - e * e)};
}

/// (iE + sqrt(4 - E^2)) / 2.
[[nodiscard]] inline std::complex<double> a_plus_complex(double e) {
  require(std::fabs(e) <= 2.0, "a_plus_complex: need |E| <= 2");
  return {0.5 * std::sqrt(4.0 - e * e), 0.5 * e};
}

/// sin(2 pi xi) / (2 pi xi), equal to 1 at xi = 0.
[[nodiscard]] inline double sine_kernel_ratio(double xi) {
  const double x = 2.0 * std::numbers::pi * xi;
  if (std::fabs(x) < 1e-8) return 1.0 - x * x / 6.0;
  return std::sin(x) / x;
}

/// 1 - sin^2(pi r) / (pi r)^2, equal to 0 at r = 0.
[[nodiscard]] inline double gue_r2(double r) {
  const double x = std::numbers::pi * r;
  if (std::fabs(x) < 1e-8) return x * x / 3.0;
  const double s = std::sin(x) / x;
  return 1.0 - s * s;
}

struct SigmaArgs {
  double E = 0.0;
  double eps = 0.1;
  /// (xi_1, xi_2, xi_1', xi_2')
  std::array<std::complex<double>, 4> xi{};
  double c0 = 1.0;

  [[nodiscard]] double rho() const { return rho_sc(E); }
  [[nodiscard]] std::complex<double> alpha1() const {
    return eps - std::complex<double>(0.0, 1.0) * (xi[0] - xi[1]) / (2.0 * rho());
  }
  [[nodiscard]] std::complex<double> alpha2() const {
    return eps - std::complex<double>(0.0, 1.0) * (xi[2] - xi[3]) / (2.0 * rho());
  }
  [[nodiscard]] std::complex<double> delta1() const {
    return std::complex<double>(0.0, 1.0) * (xi[2] - xi[0]) / (2.0 * rho());
  }
  [[nodiscard]] std::complex<double> delta2() const {
    return std::complex<double>(0.0, 1.0) * (xi[1] - xi[3]) / (2.0 * rho());
  }
  /// True when |E| < sqrt 2, where the sigma-model limits are stated.
  [[nodiscard]] bool in_regime() const { return std::fabs(E) < std::numbers::sqrt2; }
};

/// exp(-g_+(E) (xi_1 + xi_1' - xi_2 - xi_2') / rho(E)).
[[nodiscard]] inline std::complex<double> C_star_E(const SigmaArgs& a) {
  return std::exp(-g_plus(a.E) * ((a.xi[0] - a.xi[1]) + (a.xi[2] - a.xi[3])) / a.rho());
}

/// Limit of the (+-) generalized correlator,
/// C*_E [ d1 d2 (e^{2 c0 a1} - 1) / (a1 a2) - (d1 + d2) e^{2 c0 a1} / a2
///        + e^{2 c0 a1} a1 / a2 ].
[[nodiscard]] inline std::complex<double> sigma_rpm(const SigmaArgs& a) {
  const auto a1 = a.alpha1();
  const auto a2 = a.alpha2();
  if (a2 == std::complex<double>{}) throw InvalidArgument("sigma_rpm: alpha_2 = 0");
  const auto d1 = a.delta1();
  const auto d2 = a.delta2();
  const auto grow = std::exp(2.0 * a.c0 * a1);
  // (e^{2 c0 a1} - 1) / a1 without cancellation near a1 = 0.
  std::complex<double> q;
  const auto x = 2.0 * a.c0 * a1;
  if (std::abs(x) < 1e-5) {
    q = 2.0 * a.c0 * (1.0 + x / 2.0 + x * x / 6.0);
  } else {
    q = (grow - 1.0) / a1;
  }
  return C_star_E(a) * (d1 * d2 * q / a2 - (d1 + d2) * grow / a2 + grow * a1 / a2);
}

/// Limit of the (++) generalized correlator, e^{i a_+ (xi_1' + xi_2' - xi_1 - xi_2) / rho}.
[[nodiscard]] inline std::complex<double> sigma_rpp(const SigmaArgs& a) {
  const std::complex<double> I(0.0, 1.0);
  return std::exp(I * a_plus_complex(a.E) * (a.xi[2] + a.xi[3] - a.xi[0] - a.xi[1]) / a.rho());
}

/// Mixed derivative of sigma_rpp in xi_1', xi_2':  -a_+^2 / rho^2 times sigma_rpp.
[[nodiscard]] inline std::complex<double> sigma_rpp_mixed_derivative(const SigmaArgs& a) {
  const auto ap = a_plus_complex(a.E);
  const double r = a.rho();
  return -ap * ap / (r * r) * sigma_rpp(a);
}

struct R2Result {
  double value = 0.0;
  /// Difference of the two most refined extrapolation levels.
  double error_estimate = 0.0;
  std::vector<double> ladder;
  std::vector<double> raw;       // value at each eps of the ladder
  std::vector<double> extrapolated;  // running extrapolation using the first k+1 rungs
};

struct R2Options {
  std::vector<double> eps_ladder{0.04, 0.02, 0.01, 0.005};
  double h = 1e-3;
};

namespace detail {

// d^2 f / (d u d v) at 0 by the four-point stencil with one Richardson step.
inline std::complex<double> mixed_derivative(
    const std::function<std::complex<double>(double, double)>& f, double h) {
  auto stencil = [&](double s) {
    return (f(s, s) - f(s, -s) - f(-s, s) + f(-s, -s)) / (4.0 * s * s);
  };
  return (4.0 * stencil(0.5 * h) - stencil(h)) / 3.0;
}

// Polynomial extrapolation to eps = 0 by Neville's scheme.
inline double neville_at_zero(const std::vector<double>& eps, std::vector<double> values) {
  const std::size_t n = values.size();
  for (std::size_t k = 1; k < n; ++k)
    for (std::size_t i = 0; i + k < n; ++i)
      values[i] = (eps[i] * values[i + 1] - eps[i + k] * values[i]) / (eps[i] - eps[i + k]);
  return values[0];
}

}  // namespace detail

/// Two-point function at fixed eps from the generalized correlators:
/// R2 = [Re d^2 R+- - Re d^2 R++] / (2 pi^2), the (-+) and (--) terms being
/// the complex conjugates of (+-) and (++). The prefactor (2 pi i)^{-2} is
/// the normalization in which R2 -> 1 as |xi_1 - xi_2| grows.
[[nodiscard]] inline double r2_at_eps(double e, double eps, double xi1, double xi2, double c0,
                                      double h) {
  auto pm = [&](double u, double v) {
    SigmaArgs a{e, eps, {xi1, xi2, xi1 + u, xi2 + v}, c0};
    return sigma_rpm(a);
  };
  auto pp = [&](double u, double v) {
    SigmaArgs a{e, eps, {xi1, xi2, xi1 + u, xi2 + v}, c0};
    return sigma_rpp(a);
  };
  const auto dpm = detail::mixed_derivative(pm, h);
  const auto dpp = detail::mixed_derivative(pp, h);
  const auto total = dpp + std::conj(dpp) - dpm - std::conj(dpm);
  const std::complex<double> two_pi_i(0.0, 2.0 * std::numbers::pi);
  return (total / (two_pi_i * two_pi_i)).real();
}

/// R2 at (xi_1, xi_2) extrapolated to eps -> 0 along the ladder.
[[nodiscard]] inline R2Result r2_from_generalized(double e, double xi1, double xi2, double c0,
                                                  const R2Options& opt = {}) {
  require(opt.eps_ladder.size() >= 2, "r2_from_generalized: need at least two eps values");
  require(opt.h > 0.0, "r2_from_generalized: step must be positive");
  R2Result out;
  out.ladder = opt.eps_ladder;
  for (double eps : opt.eps_ladder) {
    require(eps > 0.0, "r2_from_generalized: eps must be positive");
    out.raw.push_back(r2_at_eps(e, eps, xi1, xi2, c0, opt.h));
  }
  for (std::size_t k = 1; k <= out.raw.size(); ++k) {
    std::vector<double> eps(opt.eps_ladder.begin(), opt.eps_ladder.begin() + static_cast<long>(k));
    std::vector<double> val(out.raw.begin(), out.raw.begin() + static_cast<long>(k));
    out.extrapolated.push_back(detail::neville_at_zero(eps, val));
  }
  out.value = out.extrapolated.back();
  out.error_estimate = std::fabs(out.extrapolated.back() - out.extrapolated[out.extrapolated.size() - 2]);
  return out;
}

struct CalibrationResult {
  double c0 = 0.0;
  std::vector<double> probes;
  std::vector<double> residuals;  // r2 - gue_r2 at each probe
  double objective = 0.0;         // sum of squared residuals
};

struct CalibrationOptions {
  std::vector<double> probes{0.5, 0.7, 1.5};
  double lo = -10.0;
  double hi = 10.0;
  double grid_step = 0.01;
  R2Options r2;
};

/// Chooses c0 minimizing the squared mismatch between the assembled R2 and
/// the GUE two-point function at the probe separations: a grid scan over
/// [lo, hi] without 0, refined by golden-section search around the best node.
[[nodiscard]] inline CalibrationResult calibrate_c0(double e, const CalibrationOptions& opt = {}) {
  require(opt.lo < opt.hi && opt.grid_step > 0.0, "calibrate_c0: bad scan range");
  require(!opt.probes.empty(), "calibrate_c0: need probe points");
  auto objective = [&](double c0) {
    double s = 0.0;
    for (double r : opt.probes) {
      const double d = r2_from_generalized(e, 0.5 * r, -0.5 * r, c0, opt.r2).value - gue_r2(r);
      s += d * d;
    }
    return s;
  };
  const auto steps = static_cast<long>(std::floor((opt.hi - opt.lo) / opt.grid_step + 0.5));
  double best = opt.lo;
  double best_val = std::numeric_limits<double>::infinity();
  for (long i = 0; i <= steps; ++i) {
    const double c = opt.lo + static_cast<double>(i) * opt.grid_step;
    if (std::fabs(c) < 0.5 * opt.grid_step) continue;
    const double v = objective(c);
    if (v < best_val) {
      best_val = v;
      best = c;
    }
  }
  double a = best - opt.grid_step;
  double b = best + opt.grid_step;
  const double g = 0.5 * (std::sqrt(5.0) - 1.0);
  double x1 = b - g * (b - a);
  double x2 = a + g * (b - a);
  double f1 = objective(x1);
  double f2 = objective(x2);
  for (int it = 0; it < 80 && b - a > 1e-12; ++it) {
    if (f1 < f2) {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - g * (b - a);
      f1 = objective(x1);
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + g * (b - a);
      f2 = objective(x2);
    }
  }
  CalibrationResult out;
  out.c0 = 0.5 * (a + b);
  out.probes = opt.probes;
  for (double r : opt.probes) {
    const double d = r2_from_generalized(e, 0.5 * r, -0.5 * r, out.c0, opt.r2).value - gue_r2(r);
    out.residuals.push_back(d);
    out.objective += d * d;
  }
  return out;
}

}  // namespace rbmlab
