#include <gtest/gtest.h>

#include <cmath>

#include "rbmlab/ensembles.hpp"

namespace {

using rbmlab::EnsembleKind;
using rbmlab::build_variance_profile;

TEST(VarianceProfile, SmoothBandThreeByThreeInverse) {
  const auto p = build_variance_profile(EnsembleKind::kSmoothBand, 3, 1, {}, {.tau_cut = 0.0});
  const double expected[3][3] = {{5, 2, 1}, {2, 4, 2}, {1, 2, 5}};
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 3; ++j) EXPECT_NEAR(p(i, j), expected[i][j] / 8.0, 1e-15);
}

TEST(VarianceProfile, SmoothBandInvertsTheStencil) {
  // (-W^2 Delta + 1) J = I, checked by an explicit tridiagonal multiply.
  const std::size_t n = 40;
  const double w = 5.0;
  const auto p = build_variance_profile(EnsembleKind::kSmoothBand, n, 5, {}, {.tau_cut = 0.0});
  for (std::size_t col = 0; col < n; ++col) {
    for (std::size_t i = 0; i < n; ++i) {
      const bool end = (i == 0 || i + 1 == n);
      double v = ((end ? 1.0 : 2.0) * w * w + 1.0) * p(i, col);
      if (i > 0) v -= w * w * p(i - 1, col);
      if (i + 1 < n) v -= w * w * p(i + 1, col);
      EXPECT_NEAR(v, i == col ? 1.0 : 0.0, 1e-12);
    }
  }
}

TEST(VarianceProfile, SmoothBandRowSumsAndDecay) {
  const std::size_t n = 200;
  const std::size_t w = 6;
  const auto full = build_variance_profile(EnsembleKind::kSmoothBand, n, w, {}, {.tau_cut = 0.0});
  for (std::size_t j = 0; j < n; ++j) EXPECT_NEAR(full.row_sum(j), 1.0, 1e-12);
  // J_jk <= C1 / W exp(-C2 |j-k| / W) in the interior.
  for (std::size_t d = 0; d < 60; ++d)
    EXPECT_LE(full(100, 100 + d), 1.0 / static_cast<double>(w) * std::exp(-0.9 * d / 6.0));

  const double tau = 1e-12;
  const auto cut = build_variance_profile(EnsembleKind::kSmoothBand, n, w, {}, {.tau_cut = tau});
  EXPECT_LT(cut.half_bandwidth(), n - 1);
  for (std::size_t j = 0; j < n; ++j) EXPECT_LT(std::fabs(cut.row_sum(j) - 1.0), n * tau);
}

TEST(VarianceProfile, SimpleBandRenormalized) {
  const auto p = build_variance_profile(EnsembleKind::kSimpleBand, 5, 1);
  for (std::size_t j = 0; j < 5; ++j) EXPECT_NEAR(p.row_sum(j), 1.0, 1e-12);
  for (std::size_t i = 0; i < 5; ++i)
    for (std::size_t j = 0; j < 5; ++j) {
      EXPECT_EQ(p(i, j), p(j, i));
      if (i + 1 < j || j + 1 < i) {
        EXPECT_EQ(p(i, j), 0.0);
      } else {
        EXPECT_GT(p(i, j), 0.0);
      }
    }
  // Interior of a long band keeps the literal value (2W)^{-1} up to the
  // rebalancing of the 2W+1 band.
  const auto big = build_variance_profile(EnsembleKind::kSimpleBand, 400, 10);
  EXPECT_NEAR(big(200, 205), 1.0 / 21.0, 1e-9);
  for (std::size_t j = 0; j < 400; ++j) EXPECT_NEAR(big.row_sum(j), 1.0, 1e-12);
}

TEST(VarianceProfile, SimpleBandLiteral) {
  const auto p = build_variance_profile(EnsembleKind::kSimpleBand, 5, 1, {}, {.edge_renorm = false});
  EXPECT_EQ(p(0, 0), 0.5);
  EXPECT_EQ(p(2, 3), 0.5);
  EXPECT_EQ(p(0, 2), 0.0);
  EXPECT_DOUBLE_EQ(p.row_sum(0), 1.0);
  EXPECT_DOUBLE_EQ(p.row_sum(2), 1.5);
}

TEST(VarianceProfile, BlockBandVariances) {
  const auto p = build_variance_profile(EnsembleKind::kBlockBand, 12, 4, 0.1);
  EXPECT_NEAR(p(4, 5), 0.2, 1e-15);    // interior diagonal block
  EXPECT_NEAR(p(0, 1), 0.225, 1e-15);  // end block
  EXPECT_NEAR(p(3, 4), 0.025, 1e-15);  // neighbouring blocks
  EXPECT_NEAR(p(0, 7), 0.025, 1e-15);
  EXPECT_EQ(p(0, 8), 0.0);              // second-neighbour blocks
  EXPECT_EQ(p(3, 8), 0.0);
  for (std::size_t j = 0; j < 12; ++j) EXPECT_NEAR(p.row_sum(j), 1.0, 1e-12);
}

TEST(VarianceProfile, RejectsBadArguments) {
  EXPECT_THROW(build_variance_profile(EnsembleKind::kSimpleBand, 4, 5), rbmlab::InvalidArgument);
  EXPECT_THROW(build_variance_profile(EnsembleKind::kBlockBand, 12, 4, 0.3),
               rbmlab::InvalidArgument);
  EXPECT_THROW(build_variance_profile(EnsembleKind::kBlockBand, 12, 4, 0.0),
               rbmlab::InvalidArgument);
  EXPECT_THROW(build_variance_profile(EnsembleKind::kBlockBand, 12, 4), rbmlab::InvalidArgument);
  EXPECT_THROW(build_variance_profile(EnsembleKind::kSimpleBand, 12, 4, 0.1),
               rbmlab::InvalidArgument);
  EXPECT_THROW(build_variance_profile(EnsembleKind::kBlockBand, 10, 4, 0.1),
               rbmlab::InvalidArgument);
}

TEST(Sample, DeterministicAndHermitian) {
  rbmlab::EnsembleSpec spec{build_variance_profile(EnsembleKind::kSimpleBand, 50, 4), 1234};
  const auto a = rbmlab::sample(spec, 7);
  const auto b = rbmlab::sample(spec, 7);
  EXPECT_EQ(a, b);
  const auto c = rbmlab::sample(spec, 8);
  EXPECT_FALSE(a == c);
  for (std::size_t i = 0; i < 50; ++i) {
    EXPECT_EQ(a(i, i).imag(), 0.0);
    for (std::size_t j = 0; j < 50; ++j) {
      EXPECT_EQ(a(i, j), std::conj(a(j, i)));
      if (i > j + 4 || j > i + 4) {
        EXPECT_EQ(a(i, j), std::complex<double>{});
      }
    }
  }
}

TEST(Sample, BlockBandZerosOutsideNeighbours) {
  rbmlab::EnsembleSpec spec{build_variance_profile(EnsembleKind::kBlockBand, 12, 4, 0.1), 99};
  const auto h = rbmlab::sample(spec, 0);
  EXPECT_EQ(h.half_bandwidth(), 7u);
  EXPECT_EQ(h(0, 8), std::complex<double>{});
  EXPECT_EQ(h(3, 9), std::complex<double>{});
  EXPECT_NE(h(3, 4), std::complex<double>{});
}

TEST(Sample, SecondMomentMatchesVariance) {
  rbmlab::EnsembleSpec spec{build_variance_profile(EnsembleKind::kSimpleBand, 2000, 20), 42};
  const auto& p = spec.profile;
  // E|H_jk|^2 over 10^4 draws; |H|^2 is exponential with mean J, so the
  // sample mean has standard deviation J / 100.
  const std::size_t draws = 10000;
  double off = 0.0;
  double diag = 0.0;
  double re2 = 0.0;
  const rbmlab::Philox4x32 gen(spec.seed);
  for (std::size_t s = 0; s < draws; ++s) {
    // Regenerate single entries directly from the counter contract that
    // sample() uses, which avoids building 10^4 full matrices.
    const auto g = rbmlab::normal_pair(gen, rbmlab::entry_counter(s, 0, 500, 510));
    const double sd = std::sqrt(p(500, 510));
    const std::complex<double> v(sd * g[0] / std::sqrt(2.0), sd * g[1] / std::sqrt(2.0));
    off += std::norm(v);
    re2 += v.real() * v.real();
    const auto gd = rbmlab::normal_pair(gen, rbmlab::entry_counter(s, 0, 700, 700));
    diag += p(700, 700) * gd[0] * gd[0];
  }
  off /= draws;
  diag /= draws;
  re2 /= draws;
  const double j = p(500, 510);
  EXPECT_NEAR(off, j, 5.0 * j / 100.0);
  EXPECT_NEAR(re2, j / 2.0, 5.0 * j / 2.0 * std::sqrt(2.0) / 100.0);
  EXPECT_NEAR(diag, p(700, 700), 5.0 * p(700, 700) * std::sqrt(2.0) / 100.0);

  // And the same entries of an actual sample agree with the regeneration.
  const auto h = rbmlab::sample(spec, 3);
  const auto g = rbmlab::normal_pair(gen, rbmlab::entry_counter(3, 0, 500, 510));
  EXPECT_DOUBLE_EQ(h(500, 510).real(), std::sqrt(j) * g[0] / std::sqrt(2.0));
}

TEST(Philox, KnownAnswer) {
  // Published known-answer vector for Philox4x32-10 with key and counter set
  // to all ones.
  const rbmlab::Philox4x32 gen(0xffffffffffffffffULL);
  const auto out = gen({0xffffffffu, 0xffffffffu, 0xffffffffu, 0xffffffffu});
  EXPECT_EQ(out[0], 0x408f276du);
  EXPECT_EQ(out[1], 0x41c83b0eu);
  EXPECT_EQ(out[2], 0xa20bc7c6u);
  EXPECT_EQ(out[3], 0x6d5451fdu);
  const rbmlab::Philox4x32 zero(0);
  const auto z = zero({0, 0, 0, 0});
  EXPECT_EQ(z[0], 0x6627e8d5u);
  EXPECT_EQ(z[1], 0xe169c58du);
  EXPECT_EQ(z[2], 0xbc57ac4cu);
  EXPECT_EQ(z[3], 0x9b00dbd8u);
}

}  // namespace
