#pragma once

#include <cmath>
#include <cstddef>
#include <numbers>
#include <vector>

#include "rbmlab/core/errors.hpp"

namespace rbmlab::special {

/// Exponentially scaled modified Bessel function e^{-x} I0(x) for x >= 0.
///
/// The power series is summed up to x = 30 (all terms positive, no
/// cancellation); above that the asymptotic series is accurate to well below
/// double precision.
[[nodiscard]] inline double bessel_i0e(double x) {
  x = std::fabs(x);
  if (x <= 30.0) {
    const double q = 0.25 * x * x;
    double term = 1.0;
    double sum = 1.0;
    for (int k = 1; k < 200; ++k) {
      term *= q / (static_cast<double>(k) * k);
      sum += term;
      if (term < 1e-17 * sum) break;
    }
    return sum * std::exp(-x);
  }
  const double inv8x = 1.0 / (8.0 * x);
  double term = 1.0;
  double sum = 1.0;
  for (int k = 1; k < 60; ++k) {
    const double next = term * (2.0 * k - 1.0) * (2.0 * k - 1.0) * inv8x / k;
    if (next >= term) break;
    term = next;
    sum += term;
    if (term < 1e-17 * sum) break;
  }
  return sum / std::sqrt(2.0 * std::numbers::pi * x);
}

/// e^{-a} I0(b) for 0 <= b <= a without forming either factor alone.
[[nodiscard]] inline double scaled_i0(double a, double b) {
  return std::exp(b - a) * bessel_i0e(b);
}

/// e^{-c} i_j(c), j = 0 .. count-1, for the modified spherical Bessel
/// functions of the first kind, by Miller's backward recurrence
/// i_{j-1} = i_{j+1} + (2j+1)/c i_j normalised with e^{-c} i_0(c) =
/// (1 - e^{-2c}) / (2c).
[[nodiscard]] inline std::vector<double> scaled_spherical_i(std::size_t count, double c) {
  require(c > 0.0, "scaled_spherical_i: argument must be positive");
  std::vector<double> out(count, 0.0);
  if (count == 0) return out;
  const auto start = count + 30 +
                     static_cast<std::size_t>(std::ceil(std::sqrt(100.0 * c)));
  double above = 0.0;
  double current = 1e-280;
  for (std::size_t j = start; j > 0; --j) {
    const double below = above + (2.0 * static_cast<double>(j) + 1.0) / c * current;
    above = current;
    current = below;
    if (j - 1 < count) out[j - 1] = current;
    if (std::fabs(current) > 1e200) {
      current *= 1e-200;
      above *= 1e-200;
      for (std::size_t m = j - 1; m < count; ++m) out[m] *= 1e-200;
    }
  }
  const double exact0 = -std::expm1(-2.0 * c) / (2.0 * c);
  const double scale = exact0 / out[0];
  for (auto& v : out) v *= scale;
  return out;
}

/// Legendre polynomial P_j(u) by the three-term recurrence.
[[nodiscard]] inline double legendre_p(int j, double u) {
  if (j == 0) return 1.0;
  double p0 = 1.0;
  double p1 = u;
  for (int k = 1; k < j; ++k) {
    const double p2 = ((2.0 * k + 1.0) * u * p1 - k * p0) / (k + 1.0);
    p0 = p1;
    p1 = p2;
  }
  return p1;
}

/// Orthonormal shifted Legendre function sqrt(2j+1) P_j(1 - 2x) on [0, 1].
[[nodiscard]] inline double shifted_legendre(int j, double x) {
  return std::sqrt(2.0 * j + 1.0) * legendre_p(j, 1.0 - 2.0 * x);
}

/// Coupling <p_{j+1}, (1-2x) p_j> of the orthonormal shifted Legendre basis:
/// multiplication by u = 1 - 2x is the Jacobi matrix of the Legendre weight.
[[nodiscard]] inline double legendre_nu_coupling(int j) {
  return (j + 1.0) / std::sqrt((2.0 * j + 1.0) * (2.0 * j + 3.0));
}

}  // namespace rbmlab::special
