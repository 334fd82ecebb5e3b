#pragma once

// Variance profiles of the three 1d Gaussian band ensembles and a
// reproducible sampler for Hermitian matrices drawn from them.

#include <cmath>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "rbmlab/core/errors.hpp"
#include "rbmlab/core/rng.hpp"

namespace rbmlab {

enum class EnsembleKind { kSimpleBand, kSmoothBand, kBlockBand };

[[nodiscard]] inline std::string_view to_string(EnsembleKind kind) noexcept {
  switch (kind) {
    case EnsembleKind::kSimpleBand: return "simple_band";
    case EnsembleKind::kSmoothBand: return "smooth_band";
    case EnsembleKind::kBlockBand: return "block_band";
  }
  return "unknown";
}

[[nodiscard]] inline EnsembleKind parse_ensemble_kind(std::string_view name) {
  if (name == "simple_band") return EnsembleKind::kSimpleBand;
  if (name == "smooth_band") return EnsembleKind::kSmoothBand;
  if (name == "block_band") return EnsembleKind::kBlockBand;
  throw InvalidArgument("unknown ensemble kind '" + std::string(name) + "'");
}

struct ProfileOptions {
  /// SimpleBand: rescale the band symmetrically so every row sums to 1.
  /// When false the literal entries (2W)^{-1} are kept.
  bool edge_renorm = true;
  /// SmoothBand: variances below this are dropped; 0 keeps the full matrix.
  double tau_cut = 1e-12;
};

/// Entry variances J_jk = E|H_jk|^2, stored as a symmetric band.
class VarianceProfile {
 public:
  VarianceProfile(EnsembleKind kind, std::size_t n, std::size_t w,
                  std::optional<double> alpha, std::size_t half_bandwidth)
      : kind_(kind),
        n_(n),
        w_(w),
        alpha_(alpha),
        b_(half_bandwidth),
        band_(n * (half_bandwidth + 1), 0.0) {}

  [[nodiscard]] EnsembleKind kind() const noexcept { return kind_; }
  [[nodiscard]] std::size_t size() const noexcept { return n_; }
  [[nodiscard]] std::size_t bandwidth() const noexcept { return w_; }
  [[nodiscard]] std::optional<double> alpha() const noexcept { return alpha_; }
  /// Largest |j-k| with a nonzero variance.
  [[nodiscard]] std::size_t half_bandwidth() const noexcept { return b_; }

  [[nodiscard]] double operator()(std::size_t j, std::size_t k) const noexcept {
    if (j > k) std::swap(j, k);
    const std::size_t d = k - j;
    return d > b_ ? 0.0 : band_[j * (b_ + 1) + d];
  }

  /// Sum over k of J_jk.
  [[nodiscard]] double row_sum(std::size_t j) const noexcept {
    double s = 0.0;
    const std::size_t lo = j >= b_ ? j - b_ : 0;
    const std::size_t hi = std::min(n_ - 1, j + b_);
    for (std::size_t k = lo; k <= hi; ++k) s += (*this)(j, k);
    return s;
  }

  /// Mutable access to J_{j, j+d}; d <= half_bandwidth().
  double& upper(std::size_t j, std::size_t d) noexcept { return band_[j * (b_ + 1) + d]; }

 private:
  EnsembleKind kind_;
  std::size_t n_;
  std::size_t w_;
  std::optional<double> alpha_;
  std::size_t b_;
  std::vector<double> band_;
};

namespace detail {

// Symmetric matrix balancing of the 0/1 band indicator A (|i-j| <= W): finds
// x > 0 with x_i (A x)_i = 1, so J = diag(x) A diag(x) is symmetric with unit
// row sums.
inline std::vector<double> balance_band_indicator(std::size_t n, std::size_t w) {
  std::vector<double> x(n, 1.0 / std::sqrt(static_cast<double>(std::min(n, 2 * w + 1))));
  std::vector<double> ax(n);
  std::vector<double> prefix(n + 1);
  auto apply = [&] {
    prefix[0] = 0.0;
    for (std::size_t i = 0; i < n; ++i) prefix[i + 1] = prefix[i] + x[i];
    for (std::size_t i = 0; i < n; ++i) {
      const std::size_t lo = i >= w ? i - w : 0;
      const std::size_t hi = std::min(n - 1, i + w);
      double s = 0.0;
      for (std::size_t k = lo; k <= hi; ++k) s += x[k];
      ax[i] = s;
    }
  };
  for (int it = 0; it < 100000; ++it) {
    apply();
    double worst = 0.0;
    for (std::size_t i = 0; i < n; ++i) worst = std::max(worst, std::fabs(x[i] * ax[i] - 1.0));
    if (worst < 1e-15) break;
    for (std::size_t i = 0; i < n; ++i) x[i] = std::sqrt(x[i] / ax[i]);
  }
  return x;
}

// Solves M x = e_col for the tridiagonal M = -W^2 Delta + 1 with the boundary
// stencil -f_{j-1} + f_j - f_{j+1} at the two ends.
inline void solve_smooth_column(std::size_t n, double w2, std::size_t col,
                                std::vector<double>& x, std::vector<double>& scratch) {
  auto diag = [&](std::size_t i) {
    return (i == 0 || i + 1 == n) ? w2 + 1.0 : 2.0 * w2 + 1.0;
  };
  const double off = -w2;
  // Thomas algorithm; scratch holds the modified super-diagonal.
  double denom = diag(0);
  scratch[0] = off / denom;
  x[0] = (col == 0 ? 1.0 : 0.0) / denom;
  for (std::size_t i = 1; i < n; ++i) {
    denom = diag(i) - off * scratch[i - 1];
    scratch[i] = off / denom;
    x[i] = ((i == col ? 1.0 : 0.0) - off * x[i - 1]) / denom;
  }
  for (std::size_t i = n - 1; i-- > 0;) x[i] -= scratch[i] * x[i + 1];
}

}  // namespace detail

/// Builds the variance profile of an ensemble.
///
/// SimpleBand: (2W)^{-1} on |j-k| <= W, symmetrically rebalanced to unit row
/// sums unless options.edge_renorm is false. SmoothBand: (-W^2 Delta + 1)^{-1}.
/// BlockBand: N = nW with J = (1 + alpha Delta)/W on the block lattice, i.e.
/// (1-2 alpha)/W inside interior diagonal blocks, (1-alpha)/W inside the two
/// end blocks and alpha/W between neighbouring blocks.
[[nodiscard]] inline VarianceProfile build_variance_profile(
    EnsembleKind kind, std::size_t n, std::size_t w, std::optional<double> alpha = {},
    const ProfileOptions& options = {}) {
  require(n >= 2, "variance profile: N must be at least 2");
  require(w >= 1, "variance profile: W must be positive");
  require(w <= n, "variance profile: W must not exceed N");
  require(alpha.has_value() == (kind == EnsembleKind::kBlockBand),
          "variance profile: alpha is required for block_band and only for it");

  switch (kind) {
    case EnsembleKind::kSimpleBand: {
      const std::size_t b = std::min(w, n - 1);
      VarianceProfile p(kind, n, w, alpha, b);
      if (options.edge_renorm) {
        const auto x = detail::balance_band_indicator(n, w);
        for (std::size_t j = 0; j < n; ++j)
          for (std::size_t d = 0; d <= b && j + d < n; ++d) p.upper(j, d) = x[j] * x[j + d];
      } else {
        const double v = 1.0 / (2.0 * static_cast<double>(w));
        for (std::size_t j = 0; j < n; ++j)
          for (std::size_t d = 0; d <= b && j + d < n; ++d) p.upper(j, d) = v;
      }
      return p;
    }
    case EnsembleKind::kSmoothBand: {
      require(options.tau_cut >= 0.0 && options.tau_cut < 1.0,
              "variance profile: tau_cut must lie in [0, 1)");
      std::size_t b = n - 1;
      if (options.tau_cut > 0.0) {
        const double reach = std::ceil(static_cast<double>(w) * std::log(1.0 / options.tau_cut));
        b = std::min<std::size_t>(n - 1, static_cast<std::size_t>(reach));
      }
      VarianceProfile p(kind, n, w, alpha, b);
      const double w2 = static_cast<double>(w) * static_cast<double>(w);
      std::vector<double> x(n);
      std::vector<double> scratch(n);
      for (std::size_t col = 0; col < n; ++col) {
        detail::solve_smooth_column(n, w2, col, x, scratch);
        const std::size_t lo = col >= b ? col - b : 0;
        for (std::size_t j = lo; j <= col; ++j) {
          const double v = x[j];
          p.upper(j, col - j) = (v < options.tau_cut) ? 0.0 : v;
        }
      }
      return p;
    }
    case EnsembleKind::kBlockBand: {
      const double a = *alpha;
      require(a > 0.0 && a < 0.25, "variance profile: alpha must lie in (0, 1/4)");
      require(n % w == 0, "variance profile: block_band needs N divisible by W");
      const std::size_t blocks = n / w;
      require(blocks >= 2, "variance profile: block_band needs at least two blocks");
      const std::size_t b = std::min(n - 1, 2 * w - 1);
      VarianceProfile p(kind, n, w, alpha, b);
      const double inv_w = 1.0 / static_cast<double>(w);
      for (std::size_t j = 0; j < n; ++j) {
        for (std::size_t d = 0; d <= b && j + d < n; ++d) {
          const std::size_t bj = j / w;
          const std::size_t bk = (j + d) / w;
          double v = 0.0;
          if (bj == bk) {
            const bool end_block = (bj == 0 || bj + 1 == blocks);
            v = (end_block ? 1.0 - a : 1.0 - 2.0 * a) * inv_w;
          } else if (bk == bj + 1) {
            v = a * inv_w;
          }
          p.upper(j, d) = v;
        }
      }
      return p;
    }
  }
  throw InvalidArgument("variance profile: unknown kind");
}

/// Hermitian band matrix; row j stores H_{j, j+d} for d = 0 .. b.
class HermitianBandMatrix {
 public:
  HermitianBandMatrix(std::size_t n, std::size_t half_bandwidth)
      : n_(n), b_(half_bandwidth), data_(n * (half_bandwidth + 1)) {}

  [[nodiscard]] std::size_t size() const noexcept { return n_; }
  [[nodiscard]] std::size_t half_bandwidth() const noexcept { return b_; }

  /// H_{j, j+d}. Entries past the last row are zero.
  [[nodiscard]] const std::complex<double>& upper(std::size_t j, std::size_t d) const noexcept {
    return data_[j * (b_ + 1) + d];
  }
  std::complex<double>& upper(std::size_t j, std::size_t d) noexcept {
    return data_[j * (b_ + 1) + d];
  }

  /// Full matrix entry; the lower triangle is the conjugate of the upper.
  [[nodiscard]] std::complex<double> operator()(std::size_t i, std::size_t j) const noexcept {
    if (i <= j) return j - i > b_ ? std::complex<double>{} : upper(i, j - i);
    return i - j > b_ ? std::complex<double>{} : std::conj(upper(j, i - j));
  }

  /// Largest entry magnitude.
  [[nodiscard]] double max_abs() const noexcept {
    double m = 0.0;
    for (const auto& v : data_) m = std::max(m, std::abs(v));
    return m;
  }

  [[nodiscard]] const std::vector<std::complex<double>>& raw() const noexcept { return data_; }

  friend bool operator==(const HermitianBandMatrix&, const HermitianBandMatrix&) = default;

 private:
  std::size_t n_;
  std::size_t b_;
  std::vector<std::complex<double>> data_;
};

struct EnsembleSpec {
  VarianceProfile profile;
  std::uint64_t seed = 0;

  /// Number of W x W blocks (BlockBand) or sites (other kinds) of the chain.
  [[nodiscard]] std::size_t chain_length() const noexcept {
    return profile.kind() == EnsembleKind::kBlockBand ? profile.size() / profile.bandwidth()
                                                        : profile.size();
  }
};

/// Draws sample `index` of the ensemble.
///
/// Entry (j, k), j < k, is sqrt(J_jk) (g1 + i g2) / sqrt(2) and the diagonal is
/// sqrt(J_jj) g1, where (g1, g2) is the Box-Muller pair of the Philox block at
/// counter (j, k, index, attempt) under key = seed. `attempt` selects an
/// independent redraw of the same sample slot.
[[nodiscard]] inline HermitianBandMatrix sample(const EnsembleSpec& spec, std::uint64_t index,
                                                std::uint32_t attempt = 0) {
  const auto& p = spec.profile;
  const std::size_t n = p.size();
  const std::size_t b = p.half_bandwidth();
  HermitianBandMatrix h(n, b);
  const Philox4x32 gen(spec.seed);
  constexpr double kInvSqrt2 = 0.70710678118654752440;
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t d = 0; d <= b && j + d < n; ++d) {
      const double var = p(j, j + d);
      if (var == 0.0) continue;
      const auto g = normal_pair(gen, entry_counter(index, attempt, static_cast<std::uint32_t>(j),
                                                    static_cast<std::uint32_t>(j + d)));
      const double sd = std::sqrt(var);
      h.upper(j, d) = (d == 0) ? std::complex<double>(sd * g[0], 0.0)
                               : std::complex<double>(sd * kInvSqrt2 * g[0], sd * kInvSqrt2 * g[1]);
    }
  }
  return h;
}

}  // namespace rbmlab
