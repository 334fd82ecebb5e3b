#include <gtest/gtest.h>

#include <cmath>

#include "dense_oracles.hpp"
#include "rbmlab/core/expm.hpp"
#include "rbmlab/core/quadrature.hpp"
#include "rbmlab/core/special.hpp"

namespace {

TEST(BesselI0e, MatchesStandardLibrary) {
  for (double x : {0.0, 1e-3, 0.5, 3.0, 7.9, 8.1, 15.0, 29.9, 30.1, 50.0, 200.0, 700.0}) {
    const double ref = std::cyl_bessel_i(0.0, x) * std::exp(-x);
    EXPECT_NEAR(rbmlab::special::bessel_i0e(x), ref, 1e-14 * ref) << x;
  }
  // Beyond the range of unscaled I0.
  EXPECT_NEAR(rbmlab::special::bessel_i0e(1e6),
              (1.0 + 1.0 / 8e6 + 9.0 / (128.0 * 1e12)) / std::sqrt(2.0 * M_PI * 1e6), 1e-18);
}

TEST(ScaledSphericalI, MatchesClosedForms) {
  for (double c : {0.1, 1.0, 5.0, 200.0}) {
    const auto v = rbmlab::special::scaled_spherical_i(4, c);
    const double i0 = std::sinh(c) / c;
    const double i1 = std::cosh(c) / c - std::sinh(c) / (c * c);
    const double i2 = (3.0 / (c * c) + 1.0) * std::sinh(c) / c - 3.0 * std::cosh(c) / (c * c);
    if (c < 100) {
      EXPECT_NEAR(v[0], std::exp(-c) * i0, 1e-14);
      EXPECT_NEAR(v[1], std::exp(-c) * i1, 1e-14);
      EXPECT_NEAR(v[2], std::exp(-c) * i2, 1e-13);
    } else {
      EXPECT_NEAR(v[0], 0.5 / c, 1e-14);
    }
  }
}

TEST(GaussLegendre, IntegratesPolynomialsExactly) {
  const auto rule = rbmlab::gauss_legendre(10, 0.0, 1.0);
  for (int k = 0; k < 20; ++k) {
    double s = 0.0;
    for (std::size_t i = 0; i < rule.size(); ++i) s += rule.weights[i] * std::pow(rule.nodes[i], k);
    EXPECT_NEAR(s, 1.0 / (k + 1), 1e-14);
  }
  for (std::size_t i = 1; i < rule.size(); ++i) EXPECT_LT(rule.nodes[i - 1], rule.nodes[i]);
}

TEST(Expm, MatchesSeriesAndDiagonal) {
  Eigen::MatrixXcd a(2, 2);
  a << 0.0, 1.0, -1.0, 0.0;
  const auto e = rbmlab::expm_pade13(a * 3.0);
  EXPECT_NEAR(std::abs(e(0, 0) - std::cos(3.0)), 0.0, 1e-13);
  EXPECT_NEAR(std::abs(e(0, 1) - std::sin(3.0)), 0.0, 1e-13);
  Eigen::MatrixXd d = Eigen::MatrixXd::Zero(3, 3);
  d(0, 0) = -50.0;
  d(1, 1) = 2.0;
  d(2, 2) = -0.1;
  const auto ed = rbmlab::expm_pade13(d);
  EXPECT_NEAR(ed(0, 0), std::exp(-50.0), 1e-30);
  EXPECT_NEAR(ed(1, 1), std::exp(2.0), 1e-13);
}

}  // namespace
