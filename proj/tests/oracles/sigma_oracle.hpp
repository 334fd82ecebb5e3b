#pragma once

// Second, independent transcription of the sigma-model limit formulas in
// long double, written from the formulas rather than from the library code.

#include <cmath>
#include <complex>

namespace oracle {

using cl = std::complex<long double>;

inline cl rpm_long(long double e, long double eps, cl x1, cl x2, cl x1p, cl x2p, long double c0) {
  const long double pi = 3.141592653589793238462643383279502884L;
  const long double rho = std::sqrt(4.0L - e * e) / (2.0L * pi);
  const cl i(0.0L, 1.0L);
  const cl gp(-e / 2.0L, std::sqrt(4.0L - e * e) / 2.0L);
  const cl a1 = eps - i * (x1 - x2) / (2.0L * rho);
  const cl a2 = eps - i * (x1p - x2p) / (2.0L * rho);
  const cl d1 = i * (x1p - x1) / (2.0L * rho);
  const cl d2 = i * (x2 - x2p) / (2.0L * rho);
  const cl cstar = std::exp(-gp * (x1 + x1p - x2 - x2p) / rho);
  const cl ex = std::exp(2.0L * c0 * a1);
  return cstar * ((d1 * d2) / (a1 * a2) * (ex - 1.0L) - (d1 + d2) / a2 * ex + ex * a1 / a2);
}

inline cl rpp_long(long double e, cl x1, cl x2, cl x1p, cl x2p) {
  const long double pi = 3.141592653589793238462643383279502884L;
  const long double rho = std::sqrt(4.0L - e * e) / (2.0L * pi);
  const cl ap(std::sqrt(4.0L - e * e) / 2.0L, e / 2.0L);
  return std::exp(cl(0.0L, 1.0L) * ap * (x1p + x2p - x1 - x2) / rho);
}

}  // namespace oracle
