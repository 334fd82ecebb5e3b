#pragma once

// Monte Carlo estimators over sampled band matrices: density of states,
// the normalized characteristic-polynomial correlator, the first generalized
// correlator and the unfolded pair correlation of eigenvalues.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <numbers>
#include <vector>

#include "rbmlab/band_linalg.hpp"
#include "rbmlab/core/errors.hpp"
#include "rbmlab/core/parallel.hpp"
#include "rbmlab/ensembles.hpp"
#include "rbmlab/limits.hpp"

namespace rbmlab {

/// Bulk energy E with rescaled offset xi and regularization eps.
struct SpectralArgs {
  double E = 0.0;
  double xi = 0.0;
  double eps = 1.0;

  [[nodiscard]] double rho() const { return rho_sc(E); }
  /// E + xi / (N rho(E)).
  [[nodiscard]] double lambda1(std::size_t n) const {
    return E + xi / (static_cast<double>(n) * rho());
  }
  /// E - xi / (N rho(E)).
  [[nodiscard]] double lambda2(std::size_t n) const {
    return E - xi / (static_cast<double>(n) * rho());
  }
  /// Outside |E| < sqrt 2, where the pair-correlation limits are stated.
  [[nodiscard]] bool sigma_regime_warning() const { return std::fabs(E) >= std::numbers::sqrt2; }
  /// Outside |E| <= 4 sqrt 2 / 3, where the first-correlator limit is stated.
  [[nodiscard]] bool r1_regime_warning() const {
    return std::fabs(E) > 4.0 * std::numbers::sqrt2 / 3.0;
  }
};

struct MCEstimate {
  std::complex<double> mean;
  double std_error = 0.0;
  std::size_t count = 0;
  /// Shared log-scale removed from numerator and denominator samples.
  double exponent_offset = 0.0;
  /// Samples that had to be redrawn after a singular pivot.
  std::size_t resampled = 0;
  /// Kish effective sample size (sum w)^2 / sum w^2 of the denominator
  /// weights. Far below `count`, the mean is carried by a few samples and
  /// std_error understates the uncertainty.
  double effective_samples = 0.0;
};

struct Histogram {
  std::vector<double> edges;
  std::vector<double> counts;
  std::vector<double> density;
  std::vector<double> std_error;
  std::size_t samples_used = 0;
  std::size_t samples_skipped = 0;

  [[nodiscard]] std::size_t bins() const noexcept { return counts.size(); }
  [[nodiscard]] double center(std::size_t i) const { return 0.5 * (edges[i] + edges[i + 1]); }
  [[nodiscard]] double mass() const {
    double m = 0.0;
    for (std::size_t i = 0; i < bins(); ++i) m += density[i] * (edges[i + 1] - edges[i]);
    return m;
  }
};

[[nodiscard]] inline std::vector<double> uniform_edges(double lo, double hi, std::size_t bins) {
  require(bins >= 1 && hi > lo, "uniform_edges: need bins >= 1 and hi > lo");
  std::vector<double> e(bins + 1);
  for (std::size_t i = 0; i <= bins; ++i)
    e[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(bins);
  return e;
}

namespace detail {

inline std::size_t bin_index(const std::vector<double>& edges, double x) {
  if (x < edges.front() || x >= edges.back()) return edges.size();
  const auto it = std::upper_bound(edges.begin(), edges.end(), x);
  return static_cast<std::size_t>(it - edges.begin()) - 1;
}

// Draws a sample, redrawing under a new attempt number if `fn` hits a
// singular pivot. Returns fn's result and counts the redraws.
template <class Fn>
auto with_resampling(const EnsembleSpec& spec, std::uint64_t index, std::size_t& redraws, Fn&& fn) {
  for (std::uint32_t attempt = 0; attempt < 256; ++attempt) {
    try {
      return fn(sample(spec, index, attempt));
    } catch (const SingularPivotError&) {
      ++redraws;
    }
  }
  throw ConvergenceError("sample " + std::to_string(index) + ": 256 consecutive singular pivots");
}

// Per-sample statistics reduced into a histogram with across-sample errors.
inline Histogram reduce_histogram(std::vector<double> edges,
                                  const std::vector<std::vector<double>>& per_sample,
                                  const std::vector<double>& expected_per_sample,
                                  std::size_t skipped) {
  Histogram h;
  h.edges = std::move(edges);
  const std::size_t bins = h.edges.size() - 1;
  h.counts.assign(bins, 0.0);
  h.density.assign(bins, 0.0);
  h.std_error.assign(bins, 0.0);
  h.samples_skipped = skipped;
  h.samples_used = per_sample.size();
  const auto s = static_cast<double>(per_sample.size());
  if (per_sample.empty()) return h;
  for (std::size_t i = 0; i < bins; ++i) {
    double sum = 0.0;
    double sum2 = 0.0;
    for (const auto& row : per_sample) {
      sum += row[i];
      sum2 += row[i] * row[i];
    }
    h.counts[i] = sum;
    const double mean = sum / s;
    const double var = s > 1.0 ? std::max(0.0, (sum2 - s * mean * mean) / (s - 1.0)) : 0.0;
    h.density[i] = mean / expected_per_sample[i];
    h.std_error[i] = std::sqrt(var / s) / expected_per_sample[i];
  }
  return h;
}

}  // namespace detail

/// Pooled eigenvalue histogram normalized so that the density carries the
/// fraction of all eigenvalues falling into the bins (unit mass when the bins
/// cover the spectrum). Errors are across-sample standard errors.
[[nodiscard]] inline Histogram dos_histogram(const EnsembleSpec& spec,
                                             const std::vector<double>& edges,
                                             std::size_t samples, int workers) {
  require(samples >= 1, "dos_histogram: need at least one sample");
  require(edges.size() >= 2, "dos_histogram: need at least one bin");
  const std::size_t bins = edges.size() - 1;
  const std::size_t n = spec.profile.size();
  std::vector<std::vector<double>> rows(samples, std::vector<double>(bins, 0.0));
  std::vector<char> failed(samples, 0);
  parallel_for(samples, workers, [&](std::size_t s) {
    try {
      const auto ev = eigenvalues(sample(spec, s));
      for (double x : ev.values) {
        const auto b = detail::bin_index(edges, x);
        if (b < bins) rows[s][b] += 1.0;
      }
    } catch (const ConvergenceError&) {
      failed[s] = 1;
    }
  });
  std::vector<std::vector<double>> kept;
  std::size_t skipped = 0;
  for (std::size_t s = 0; s < samples; ++s) {
    if (failed[s]) {
      ++skipped;
    } else {
      kept.push_back(std::move(rows[s]));
    }
  }
  std::vector<double> expected(bins);
  for (std::size_t i = 0; i < bins; ++i)
    expected[i] = static_cast<double>(n) * (edges[i + 1] - edges[i]);
  return detail::reduce_histogram(edges, kept, expected, skipped);
}

/// Estimates E{det(H - l1) det(H - l2)} / E{det(H - E)^2}, l_{1,2} = E +- xi/(N rho),
/// for each xi on the same sampled matrices.
///
/// Numerator and denominator use the same H; both are scaled by exp(-c) with
/// c the largest log-magnitude seen over all samples and offsets, and the
/// standard error comes from the delta method on the coupled pair.
[[nodiscard]] inline std::vector<MCEstimate> charpoly_ratio(const EnsembleSpec& spec, double e,
                                                            const std::vector<double>& xis,
                                                            std::size_t samples, int workers) {
  require(samples >= 2, "charpoly_ratio: need at least two samples");
  require(spec.profile.kind() != EnsembleKind::kBlockBand,
          "charpoly_ratio: defined for simple_band and smooth_band");
  const std::size_t n = spec.profile.size();
  const std::size_t m = xis.size();
  struct Row {
    double log0 = 0.0;
    std::vector<double> log;
    std::vector<double> sign;
    std::size_t redraws = 0;
  };
  std::vector<Row> rows(samples);
  parallel_for(samples, workers, [&](std::size_t s) {
    std::size_t redraws = 0;
    rows[s] = detail::with_resampling(spec, s, redraws, [&](const HermitianBandMatrix& h) {
      Row r;
      r.log0 = 2.0 * shifted_logdet(h, e).log_abs;
      r.log.resize(m);
      r.sign.resize(m);
      for (std::size_t k = 0; k < m; ++k) {
        const SpectralArgs arg{e, xis[k], 0.0};
        const auto d1 = shifted_logdet(h, arg.lambda1(n));
        const auto d2 = shifted_logdet(h, arg.lambda2(n));
        r.log[k] = d1.log_abs + d2.log_abs;
        r.sign[k] = d1.phase.real() * d2.phase.real();
      }
      return r;
    });
    rows[s].redraws = redraws;
  });
  std::size_t redraws = 0;
  for (const auto& r : rows) redraws += r.redraws;

  std::vector<MCEstimate> out(m);
  const auto S = static_cast<double>(samples);
  for (std::size_t k = 0; k < m; ++k) {
    double c = -std::numeric_limits<double>::infinity();
    for (const auto& r : rows) c = std::max({c, r.log0, r.log[k]});
    double sx = 0.0;
    double sy = 0.0;
    double syy = 0.0;
    for (const auto& r : rows) {
      sx += r.sign[k] * std::exp(r.log[k] - c);
      const double y = std::exp(r.log0 - c);
      sy += y;
      syy += y * y;
    }
    const double mx = sx / S;
    const double my = sy / S;
    double vxx = 0.0;
    double vyy = 0.0;
    double vxy = 0.0;
    for (const auto& r : rows) {
      const double dx = r.sign[k] * std::exp(r.log[k] - c) - mx;
      const double dy = std::exp(r.log0 - c) - my;
      vxx += dx * dx;
      vyy += dy * dy;
      vxy += dx * dy;
    }
    vxx /= (S - 1.0);
    vyy /= (S - 1.0);
    vxy /= (S - 1.0);
    const double ratio = mx / my;
    const double var = (vxx - 2.0 * ratio * vxy + ratio * ratio * vyy) / (S * my * my);
    out[k].mean = ratio;
    out[k].std_error = std::sqrt(std::max(0.0, var));
    out[k].count = samples;
    out[k].exponent_offset = c;
    out[k].resampled = redraws;
    out[k].effective_samples = sy * sy / syy;
  }
  return out;
}

struct R1Estimate {
  std::complex<double> value;  // median of the group means, per component
  double spread = 0.0;         // robust standard error of that median
  std::size_t count = 0;
  std::size_t groups = 0;
  std::vector<std::complex<double>> group_means;
};

/// Median-of-means estimate of E{det(H - z') / det(H - z)} with
/// z' = E + i eps / N and z = z' + xi / N, so the derivative in xi at 0 is
/// the Stieltjes transform at z' and the large-N value is exp(xi g_+(E)).
///
/// Samples are split into `groups` contiguous groups; the result is the
/// componentwise median of the group means, with spread 1.4826 MAD / sqrt(G).
[[nodiscard]] inline R1Estimate r1_ratio(const EnsembleSpec& spec, const SpectralArgs& args,
                                         std::size_t samples, int workers,
                                         std::size_t groups = 16) {
  require(args.eps > 0.0, "r1_ratio: eps must be positive");
  require(groups >= 1 && samples >= groups, "r1_ratio: need at least one sample per group");
  const double n = static_cast<double>(spec.profile.size());
  const std::complex<double> zp(args.E, args.eps / n);
  const std::complex<double> z = zp + args.xi / n;
  std::vector<std::complex<double>> ratio(samples);
  parallel_for(samples, workers, [&](std::size_t s) {
    std::size_t redraws = 0;
    ratio[s] = detail::with_resampling(spec, s, redraws, [&](const HermitianBandMatrix& h) {
      const auto num = shifted_logdet(h, zp);
      const auto den = shifted_logdet(h, z);
      return std::exp(num.log_abs - den.log_abs) * num.phase / den.phase;
    });
  });

  R1Estimate out;
  out.count = samples;
  out.groups = groups;
  out.group_means.resize(groups);
  for (std::size_t g = 0; g < groups; ++g) {
    const std::size_t lo = g * samples / groups;
    const std::size_t hi = (g + 1) * samples / groups;
    std::complex<double> sum{};
    for (std::size_t s = lo; s < hi; ++s) sum += ratio[s];
    out.group_means[g] = sum / static_cast<double>(hi - lo);
  }
  auto median = [](std::vector<double> v) {
    std::sort(v.begin(), v.end());
    const std::size_t k = v.size();
    return k % 2 == 1 ? v[k / 2] : 0.5 * (v[k / 2 - 1] + v[k / 2]);
  };
  std::vector<double> re(groups);
  std::vector<double> im(groups);
  for (std::size_t g = 0; g < groups; ++g) {
    re[g] = out.group_means[g].real();
    im[g] = out.group_means[g].imag();
  }
  const double mre = median(re);
  const double mim = median(im);
  for (std::size_t g = 0; g < groups; ++g) {
    re[g] = std::fabs(re[g] - mre);
    im[g] = std::fabs(im[g] - mim);
  }
  const double mad_re = median(re);
  const double mad_im = median(im);
  out.value = {mre, mim};
  out.spread = 1.4826 * std::hypot(mad_re, mad_im) / std::sqrt(static_cast<double>(groups));
  return out;
}

/// Expected number of ordered pairs with separation in [a, b) among unit
/// density independent levels on a window of half-width L.
[[nodiscard]] inline double poisson_pair_count(double half_width, double a, double b) {
  a = std::min(a, 2.0 * half_width);
  b = std::min(b, 2.0 * half_width);
  return 2.0 * (2.0 * half_width * (b - a) - 0.5 * (b * b - a * a));
}

/// Pair-separation histogram of already unfolded levels, one vector per
/// sample, restricted to |u| <= half_width. Normalized so that independent
/// unit-density levels give 1 in every bin.
[[nodiscard]] inline Histogram pair_correlation_from_levels(
    const std::vector<std::vector<double>>& levels, double half_width,
    const std::vector<double>& edges) {
  require(half_width > 0.0, "pair_correlation: window must be positive");
  require(edges.size() >= 2 && edges.front() >= 0.0, "pair_correlation: bad separation bins");
  const std::size_t bins = edges.size() - 1;
  std::vector<std::vector<double>> rows;
  std::size_t skipped = 0;
  for (const auto& sample_levels : levels) {
    std::vector<double> u;
    for (double x : sample_levels)
      if (std::fabs(x) <= half_width) u.push_back(x);
    if (u.size() < 2) {
      ++skipped;
      continue;
    }
    std::sort(u.begin(), u.end());
    std::vector<double> row(bins, 0.0);
    for (std::size_t i = 0; i < u.size(); ++i)
      for (std::size_t j = i + 1; j < u.size(); ++j) {
        const double r = u[j] - u[i];
        if (r >= edges.back()) break;
        const auto b = detail::bin_index(edges, r);
        if (b < bins) row[b] += 2.0;
      }
    rows.push_back(std::move(row));
  }
  std::vector<double> expected(bins);
  for (std::size_t i = 0; i < bins; ++i)
    expected[i] = poisson_pair_count(half_width, edges[i], edges[i + 1]);
  return detail::reduce_histogram(edges, rows, expected, skipped);
}

/// Unfolded two-point function of eigenvalues near E.
///
/// Eigenvalues are mapped to u = N (F(lambda) - F(E)) with F the semicircle
/// distribution function, so the mean spacing near E is 1; pairs inside
/// |u| <= half_width are histogrammed by separation.
[[nodiscard]] inline Histogram pair_correlation(const EnsembleSpec& spec, double e,
                                                double half_width,
                                                const std::vector<double>& edges,
                                                std::size_t samples, int workers) {
  require(samples >= 1, "pair_correlation: need at least one sample");
  const double n = static_cast<double>(spec.profile.size());
  const double window = half_width / (n * rho_sc(e));
  require(std::fabs(e) + 2.0 * window < 1.8, "pair_correlation: window must stay in |E| < 1.8");
  const double fe = semicircle_cdf(e);
  std::vector<std::vector<double>> levels(samples);
  std::vector<char> failed(samples, 0);
  parallel_for(samples, workers, [&](std::size_t s) {
    try {
      const auto ev = eigenvalues(sample(spec, s));
      for (double x : ev.values) {
        const double u = n * (semicircle_cdf(x) - fe);
        if (std::fabs(u) <= half_width) levels[s].push_back(u);
      }
    } catch (const ConvergenceError&) {
      failed[s] = 1;
    }
  });
  std::vector<std::vector<double>> kept;
  std::size_t failures = 0;
  for (std::size_t s = 0; s < samples; ++s) {
    if (failed[s]) {
      ++failures;
    } else {
      kept.push_back(std::move(levels[s]));
    }
  }
  auto h = pair_correlation_from_levels(kept, half_width, edges);
  h.samples_skipped += failures;
  return h;
}

}  // namespace rbmlab
