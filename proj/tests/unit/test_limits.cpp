#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "rbmlab/limits.hpp"
#include "sigma_oracle.hpp"

namespace {

using cd = std::complex<double>;
using rbmlab::SigmaArgs;

TEST(ClosedForms, DensityAndStationaryPoints) {
  EXPECT_DOUBLE_EQ(rbmlab::rho_sc(0.0), 1.0 / std::numbers::pi);
  EXPECT_EQ(rbmlab::rho_sc(2.0), 0.0);
  EXPECT_EQ(rbmlab::rho_sc(-2.0), 0.0);
  EXPECT_EQ(rbmlab::g_plus(0.0), cd(0.0, 1.0));
  EXPECT_EQ(rbmlab::a_plus_complex(0.0), cd(1.0, 0.0));
  for (double e = -2.0; e <= 2.0; e += 0.125) {
    EXPECT_NEAR(std::abs(rbmlab::g_plus(e)), 1.0, 1e-15);
    EXPECT_NEAR(std::abs(rbmlab::a_plus_complex(e)), 1.0, 1e-15);
  }
  // The distribution function integrates the density.
  const double h = 1e-6;
  for (double e : {-1.5, 0.0, 0.7})
    EXPECT_NEAR((rbmlab::semicircle_cdf(e + h) - rbmlab::semicircle_cdf(e - h)) / (2 * h),
                rbmlab::rho_sc(e), 1e-8);
  EXPECT_DOUBLE_EQ(rbmlab::semicircle_cdf(0.0), 0.5);
}

TEST(ClosedForms, SineKernelAndGue) {
  EXPECT_EQ(rbmlab::sine_kernel_ratio(0.0), 1.0);
  EXPECT_NEAR(rbmlab::sine_kernel_ratio(1e-12), 1.0, 1e-15);
  EXPECT_NEAR(rbmlab::sine_kernel_ratio(0.5), 0.0, 1e-16);
  EXPECT_NEAR(rbmlab::sine_kernel_ratio(0.25), 2.0 / std::numbers::pi, 1e-15);
  EXPECT_EQ(rbmlab::gue_r2(0.0), 0.0);
  EXPECT_NEAR(rbmlab::gue_r2(1.0), 1.0, 1e-15);
  EXPECT_NEAR(rbmlab::gue_r2(0.5), 1.0 - 4.0 / (std::numbers::pi * std::numbers::pi), 1e-15);
}

TEST(SigmaArgs, AlphaDeltaIdentity) {
  for (double e : {0.0, 0.4, -1.1})
    for (double s : {0.0, 0.3, 1.7}) {
      SigmaArgs a{e, 0.2, {cd(0.7 + s, 0.01), cd(-0.5, -0.02), cd(0.4, 0.0), cd(s - 0.9, 0.015)}, 1.0};
      EXPECT_NEAR(std::abs(a.alpha1() - (a.alpha2() + a.delta1() + a.delta2())), 0.0, 1e-15);
    }
}

TEST(SigmaRpm, SpecialPoints) {
  SigmaArgs a{0.0, 0.3, {cd(0.4), cd(-0.2), cd(0.4), cd(-0.2)}, 1.5};
  EXPECT_NEAR(std::abs(rbmlab::sigma_rpm(a) - rbmlab::C_star_E(a) * std::exp(2.0 * 1.5 * a.alpha1())),
              0.0, 1e-13);
  SigmaArgs sym{0.3, 0.25, {cd(0.1), cd(0.1), cd(0.1), cd(0.1)}, -2.0};
  EXPECT_NEAR(std::abs(rbmlab::sigma_rpm(sym) - std::exp(2.0 * -2.0 * 0.25)), 0.0, 1e-14);
  SigmaArgs degenerate{0.0, 0.0, {cd(0.1), cd(0.1), cd(0.1), cd(0.1)}, 1.0};
  EXPECT_THROW(static_cast<void>(rbmlab::sigma_rpm(degenerate)), rbmlab::InvalidArgument);
}

TEST(SigmaRpm, MatchesIndependentTranscription) {
  const double c0 = 2.0 * std::numbers::pi * rbmlab::rho_sc(0.0);
  SigmaArgs a{0.0, 0.3, {cd(0.7), cd(-0.7), cd(0.5), cd(-0.5)}, c0};
  const auto ref = oracle::rpm_long(0.0L, 0.3L, 0.7L, -0.7L, 0.5L, -0.5L, static_cast<long double>(c0));
  const auto v = rbmlab::sigma_rpm(a);
  EXPECT_NEAR(v.real(), static_cast<double>(ref.real()), 1e-13);
  EXPECT_NEAR(v.imag(), static_cast<double>(ref.imag()), 1e-13);
  // Off-axis energies and complex offsets.
  SigmaArgs b{0.8, 0.2, {cd(0.3, 0.01), cd(-0.1, -0.02), cd(0.25, 0.0), cd(0.05, 0.01)}, -1.3};
  const auto rb = oracle::rpm_long(0.8L, 0.2L, {0.3L, 0.01L}, {-0.1L, -0.02L}, {0.25L, 0.0L},
                                   {0.05L, 0.01L}, -1.3L);
  EXPECT_NEAR(std::abs(rbmlab::sigma_rpm(b) - cd(static_cast<double>(rb.real()),
                                                 static_cast<double>(rb.imag()))),
              0.0, 1e-12);
}

TEST(SigmaRpm, NearZeroAlphaLimit) {
  // xi_1 - xi_2 = -2 i eps rho makes alpha_1 vanish; the series branch must
  // join the closed form continuously.
  const double rho = rbmlab::rho_sc(0.0);
  const double eps = 0.1;
  SigmaArgs at{0.0, eps, {cd(0.0, -eps * rho), cd(0.0, eps * rho), cd(0.3), cd(-0.3)}, 2.0};
  EXPECT_NEAR(std::abs(at.alpha1()), 0.0, 1e-16);
  SigmaArgs near = at;
  near.xi[0] += 1e-4;
  EXPECT_NEAR(std::abs(rbmlab::sigma_rpm(at) - rbmlab::sigma_rpm(near)), 0.0, 1e-3);
  EXPECT_TRUE(std::isfinite(std::abs(rbmlab::sigma_rpm(at))));
}

TEST(SigmaRpm, SwapSymmetryAtBandCenter) {
  SigmaArgs a{0.0, 0.2, {cd(0.6), cd(-0.3), cd(0.45), cd(-0.1)}, 1.7};
  SigmaArgs b{0.0, 0.2, {-a.xi[1], -a.xi[0], -a.xi[3], -a.xi[2]}, 1.7};
  EXPECT_EQ(rbmlab::sigma_rpm(a), rbmlab::sigma_rpm(b));
}

TEST(SigmaRpp, ValueAndDerivative) {
  SigmaArgs a{0.5, 0.1, {cd(0.2), cd(-0.2), cd(0.2), cd(-0.2)}, 1.0};
  EXPECT_NEAR(std::abs(rbmlab::sigma_rpp(a) - 1.0), 0.0, 1e-15);
  const auto ap = rbmlab::a_plus_complex(0.5);
  const double r = rbmlab::rho_sc(0.5);
  EXPECT_NEAR(std::abs(rbmlab::sigma_rpp_mixed_derivative(a) + ap * ap / (r * r)), 0.0, 1e-13);
  const double pr = std::numbers::pi * rbmlab::rho_sc(0.0);
  SigmaArgs b{0.0, 0.1, {cd(0.0), cd(0.0), cd(pr), cd(0.0)}, 1.0};
  EXPECT_NEAR(std::abs(rbmlab::sigma_rpp(b) + 1.0), 0.0, 1e-15);
  SigmaArgs c{0.9, 0.1, {cd(0.3), cd(-0.7), cd(1.1), cd(0.2)}, 1.0};
  const double shift = (1.1 + 0.2 - 0.3 + 0.7) / rbmlab::rho_sc(0.9);
  EXPECT_NEAR(std::abs(rbmlab::sigma_rpp(c)), std::exp(-0.45 * shift), 1e-14);
  const auto ref = oracle::rpp_long(0.9L, 0.3L, -0.7L, 1.1L, 0.2L);
  EXPECT_NEAR(rbmlab::sigma_rpp(c).real(), static_cast<double>(ref.real()), 1e-13);
  // Finite-difference derivative of the oracle against the closed form.
  const long double h = 1e-4L;
  auto f = [&](long double u, long double v) { return oracle::rpp_long(0.9L, 0.3L, -0.7L, 1.1L + u, 0.2L + v); };
  const auto fd = (f(h, h) - f(h, -h) - f(-h, h) + f(-h, -h)) / (4.0L * h * h);
  EXPECT_NEAR(std::abs(rbmlab::sigma_rpp_mixed_derivative(c) -
                       cd(static_cast<double>(fd.real()), static_cast<double>(fd.imag()))),
              0.0, 1e-5);
}

TEST(R2Assembly, TailApproachesOne) {
  const auto r = rbmlab::r2_from_generalized(0.0, 2.5, -2.5, -2.0);
  EXPECT_NEAR(r.value, 1.0, 1e-3);
}

TEST(R2Assembly, DependsOnlyOnSeparation) {
  const auto a = rbmlab::r2_from_generalized(0.0, 0.5, -0.2, -2.0);
  const auto b = rbmlab::r2_from_generalized(0.0, 0.9, 0.2, -2.0);
  EXPECT_NEAR(a.value, b.value, 1e-10);
  for (std::size_t k = 0; k < a.raw.size(); ++k) EXPECT_NEAR(a.raw[k], b.raw[k], 1e-10);
}

TEST(R2Assembly, MatchesIndependentAssemblyAtFixedEps) {
  // Same four-term combination built from the long double oracle with its
  // own central differences.
  const long double c0 = -2.0L;
  const long double eps = 0.05L;
  const long double x1 = 0.35L;
  const long double x2 = -0.35L;
  const long double h = 1e-3L;
  auto mixed = [&](auto f) {
    auto d = [&](long double s) { return (f(s, s) - f(s, -s) - f(-s, s) + f(-s, -s)) / (4.0L * s * s); };
    return (4.0L * d(h / 2.0L) - d(h)) / 3.0L;
  };
  const auto pm = mixed([&](long double u, long double v) {
    return oracle::rpm_long(0.0L, eps, x1, x2, x1 + u, x2 + v, c0);
  });
  const auto pp = mixed([&](long double u, long double v) {
    return oracle::rpp_long(0.0L, x1, x2, x1 + u, x2 + v);
  });
  const long double pi = 3.141592653589793238462643383279502884L;
  const long double ref = (pm.real() - pp.real()) / (2.0L * pi * pi);
  EXPECT_NEAR(rbmlab::r2_at_eps(0.0, 0.05, 0.35, -0.35, -2.0, 1e-3), static_cast<double>(ref), 1e-8);
}

TEST(R2Assembly, LadderErrorShrinks) {
  for (double r : {0.25, 0.5, 1.0}) {
    const auto res = rbmlab::r2_from_generalized(0.0, 0.5 * r, -0.5 * r, -2.0);
    ASSERT_EQ(res.extrapolated.size(), 4u);
    double prev = 1e9;
    for (std::size_t k = 1; k < res.extrapolated.size(); ++k) {
      const double step = std::fabs(res.extrapolated[k] - res.extrapolated[k - 1]);
      EXPECT_LT(step, prev) << r;
      prev = step;
    }
  }
}

TEST(R2Assembly, CoarseLadderMissesTolerance) {
  // The ladder {0.2, 0.1, 0.05} leaves an extrapolation error of a few 1e-3
  // at r = 0.5; the default finer ladder reaches 1e-6.
  rbmlab::R2Options coarse;
  coarse.eps_ladder = {0.2, 0.1, 0.05};
  const double target = rbmlab::gue_r2(0.5);
  const double fine = rbmlab::r2_from_generalized(0.0, 0.25, -0.25, -2.0).value;
  EXPECT_NEAR(fine, target, 1e-5);
  const double rough = rbmlab::r2_from_generalized(0.0, 0.25, -0.25, -2.0, coarse).value;
  EXPECT_GT(std::fabs(rough - target), 1e-3);
}

TEST(Calibration, RecoversGueCoupling) {
  const auto cal = rbmlab::calibrate_c0(0.0);
  EXPECT_NEAR(cal.c0, -2.0, 1e-3);
  for (double res : cal.residuals) EXPECT_LT(std::fabs(res), 1e-5);
}

}  // namespace
