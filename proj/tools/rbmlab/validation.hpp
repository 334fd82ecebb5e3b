#pragma once

// The acceptance checks, shared by `rbmlab validate` and the acceptance test
// binary. Each check runs at its stated scale and reports the measured value
// next to its threshold.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <complex>
#include <cstdio>
#include <functional>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "commands.hpp"
#include "dense_oracles.hpp"
#include "rbmlab/rbmlab.hpp"

namespace rbmlab::cli {

struct CheckResult {
  int id = 0;
  std::string name;
  bool passed = false;
  double value = 0.0;      // measured figure of merit
  double threshold = 0.0;  // passes when value <= threshold, unless noted in detail
  std::string detail;
  double seconds = 0.0;
};

struct CheckOptions {
  int workers = 1;
};

namespace checks {

inline std::string fmt(double x) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.4g", x);
  return buf;
}

inline CheckResult semicircle(const CheckOptions& o) {
  CheckResult r{1, "semicircle density", false, 0.0, 0.02, "", 0.0};
  EnsembleSpec spec{build_variance_profile(EnsembleKind::kSimpleBand, 1024, 32), 1};
  const auto edges = uniform_edges(-1.5, 1.5, 30);
  const auto h = dos_histogram(spec, edges, 50, o.workers);
  for (std::size_t i = 0; i < h.bins(); ++i)
    r.value = std::max(r.value, std::fabs(h.density[i] - bin_average(rho_sc, edges[i], edges[i + 1])));
  r.passed = r.value <= r.threshold;
  r.detail = "sup |rho_hat - rho_sc| over 30 bins of [-1.5, 1.5]";
  return r;
}

inline CheckResult k0_expansion(const CheckOptions&) {
  CheckResult r{2, "K0 spectrum expansion", false, 0.0, 1.0, "", 0.0};
  const auto s = k0_spectrum(4.0, 10.0, 128);
  double worst = std::fabs(s.values[0] + std::expm1(-400.0)) / 1e-10;
  std::string d = "lambda0 err " + fmt(std::fabs(s.values[0] + std::expm1(-400.0)));
  for (int j = 1; j <= 5; ++j) {
    const double jj = j * (j + 1.0);
    const double err = std::fabs(s.values[static_cast<std::size_t>(j)] - (1.0 - jj / 400.0));
    worst = std::max(worst, err / (2.0 * std::pow(jj / 100.0, 2)));
    d += ", j" + std::to_string(j) + " " + fmt(err);
  }
  r.value = worst;
  r.passed = worst <= 1.0;
  r.detail = d + " (value = worst error / tolerance)";
  return r;
}

inline CheckResult delocalized(const CheckOptions&) {
  CheckResult r{3, "delocalized transfer ratio", false, 0.0, 1e-2, "", 0.0};
  for (double xi : {0.25, 0.5, 1.0, 2.0}) {
    const auto t = transfer_ratio(100, 100.0, 0.0, xi);
    r.value = std::max(r.value, std::abs(t.value - sine_kernel_ratio(xi)));
  }
  r.passed = r.value <= r.threshold;
  r.detail = "max |ratio - sin(2 pi xi)/(2 pi xi)|, n = W = 100";
  return r;
}

inline CheckResult localized(const CheckOptions&) {
  CheckResult r{4, "localized transfer ratio", false, 0.0, 5e-2, "", 0.0};
  r.value = std::abs(transfer_ratio(100000, 10.0, 0.0, 1.0).value - 1.0);
  r.passed = r.value <= r.threshold;
  r.detail = "|ratio - 1|, n = 1e5, W = 10, xi = 1";
  return r;
}

inline CheckResult intermediate(const CheckOptions&) {
  CheckResult r{5, "intermediate regime", false, 0.0, 2e-2, "", 0.0};
  const double cstar = 1.0;
  const double t_star = derived_constants(0.0).t_star;
  bool ok = true;
  std::string d;
  for (double xi : {0.5, 1.0}) {
    double gap[2];
    int k = 0;
    for (double w : {20.0, 40.0}) {
      const auto n = static_cast<std::uint64_t>(cstar * w * w);
      gap[k++] = std::abs(transfer_ratio(n, w, 0.0, xi).value - intermediate_limit(cstar / t_star, xi));
    }
    ok = ok && gap[1] <= 0.6 * gap[0] && gap[1] <= 2e-2;
    r.value = std::max(r.value, gap[1]);
    d += "xi " + fmt(xi) + ": gap " + fmt(gap[0]) + " -> " + fmt(gap[1]) + "; ";
  }
  double sine = 0.0;
  for (double xi = 0.0; xi <= 3.0; xi += 0.125)
    sine = std::max(sine, std::abs(intermediate_limit(0.0, xi) - sine_kernel_ratio(xi)));
  ok = ok && sine <= 1e-10;
  r.passed = ok;
  r.detail = d + "C = 0 vs sine kernel " + fmt(sine);
  return r;
}

inline CheckResult mehler(const CheckOptions&) {
  CheckResult r{6, "Mehler geometric spectrum", false, 0.0, 1e-6, "", 0.0};
  const auto s = mehler_spectrum(20.0, 2.0, mehler_default_half_width(20.0, 2.0), 256);
  const double pred = mehler_predicted_ratio(20.0, 2.0);
  for (std::size_t j = 1; j <= 6; ++j)
    r.value = std::max(r.value, std::fabs(s.values[j] / s.values[j - 1] - pred));
  r.passed = r.value <= r.threshold;
  r.detail = "max ratio error over the first 6 ratios, W = 20, c = 2";
  return r;
}

inline CheckResult mc_vs_transfer(const CheckOptions& o) {
  CheckResult r{7, "Monte Carlo vs transfer operator", false, 0.0, 3.0, "", 0.0};
  EnsembleSpec spec{build_variance_profile(EnsembleKind::kSmoothBand, 100, 50), 7};
  const std::vector<double> xis{0.25, 1.0};
  const auto est = charpoly_ratio(spec, 0.0, xis, 10000, o.workers);
  bool ok = true;
  std::string d;
  for (std::size_t k = 0; k < xis.size(); ++k) {
    const auto ref = transfer_ratio(100, 50.0, 0.0, xis[k]).value;
    const double z = std::abs(est[k].mean - ref) / est[k].std_error;
    ok = ok && z <= 3.0 && est[k].std_error <= 0.02;
    r.value = std::max(r.value, z);
    d += "xi " + fmt(xis[k]) + ": mc " + fmt(est[k].mean.real()) + " transfer " + fmt(ref.real()) +
         " stderr " + fmt(est[k].std_error) + " ess " + fmt(est[k].effective_samples) + "; ";
  }
  r.passed = ok;
  r.detail = d + "needs |diff| <= 3 stderr and stderr <= 0.02";
  return r;
}

inline CheckResult localized_mc(const CheckOptions& o) {
  CheckResult r{8, "localized Monte Carlo", false, 0.0, 3.0, "", 0.0};
  EnsembleSpec spec{build_variance_profile(EnsembleKind::kSimpleBand, 1024, 8), 8};
  const auto est = charpoly_ratio(spec, 0.0, {1.0}, 10000, o.workers);
  r.value = std::abs(est[0].mean - 1.0) / est[0].std_error;
  r.passed = r.value <= r.threshold;
  r.detail = "mc " + fmt(est[0].mean.real()) + " stderr " + fmt(est[0].std_error) + " ess " +
             fmt(est[0].effective_samples) +
             ", value = |mc - 1| / stderr, N = 1024, W = 8, 1e4 samples";
  return r;
}

inline CheckResult r1_limit(const CheckOptions& o) {
  CheckResult r{9, "first correlator limit", false, 0.0, 0.1, "", 0.0};
  EnsembleSpec spec{build_variance_profile(EnsembleKind::kSimpleBand, 256, 64), 9};
  const SpectralArgs args{0.0, 1.0, 1.0};
  const auto est = r1_ratio(spec, args, 100000, o.workers, 16);
  r.value = std::fabs(est.value.real() - std::cos(1.0)) / std::cos(1.0);
  r.passed = r.value <= r.threshold;
  r.detail = "Re " + fmt(est.value.real()) + " Im " + fmt(est.value.imag()) + " (limit Im " +
             fmt(std::sin(1.0)) + ") spread " + fmt(est.spread) +
             ", value = relative error of Re vs cos(1)";
  return r;
}

inline CheckResult sigma_gue(const CheckOptions&) {
  CheckResult r{10, "sigma-model pair correlation", false, 0.0, 1e-3, "", 0.0};
  const auto cal = calibrate_c0(0.0);
  for (double x : {0.25, 0.5, 1.0, 1.5, 2.5})
    r.value = std::max(r.value, std::fabs(r2_from_generalized(0.0, 0.5 * x, -0.5 * x, cal.c0).value -
                                          gue_r2(x)));
  r.passed = r.value <= r.threshold;
  r.detail = "calibrated c0 " + fmt(cal.c0) + ", max |R2 - GUE| over r in {0.25,0.5,1,1.5,2.5}";
  return r;
}

inline CheckResult eigen_pairs(const CheckOptions& o) {
  CheckResult r{11, "eigenvalue pair correlation", false, 0.0, 0.1, "", 0.0};
  EnsembleSpec wide{build_variance_profile(EnsembleKind::kSimpleBand, 512, 256), 11};
  const auto e1 = uniform_edges(0.2, 3.0, 28);
  const auto h1 = pair_correlation(wide, 0.0, 10.0, e1, 200, o.workers);
  double d1 = 0.0;
  for (std::size_t i = 0; i < h1.bins(); ++i)
    d1 = std::max(d1, std::fabs(h1.density[i] - bin_average(gue_r2, e1[i], e1[i + 1])));
  EnsembleSpec narrow{build_variance_profile(EnsembleKind::kSimpleBand, 4096, 4), 12};
  const auto e2 = uniform_edges(0.5, 3.0, 25);
  const auto h2 = pair_correlation(narrow, 0.0, 10.0, e2, 50, o.workers);
  double d2 = 0.0;
  for (std::size_t i = 0; i < h2.bins(); ++i) d2 = std::max(d2, std::fabs(h2.density[i] - 1.0));
  r.value = std::max(d1, d2);
  r.passed = d1 <= 0.1 && d2 <= 0.1;
  r.detail = "window +-10 spacings; N=512 W=256 vs GUE sup " + fmt(d1) + "; N=4096 W=4 vs flat sup " +
             fmt(d2);
  return r;
}

inline HermitianBandMatrix random_band(std::size_t n, std::size_t b, unsigned seed) {
  std::mt19937_64 gen(seed);
  std::normal_distribution<double> g;
  HermitianBandMatrix h(n, b);
  for (std::size_t j = 0; j < n; ++j)
    for (std::size_t d = 0; d <= b && j + d < n; ++d)
      h.upper(j, d) = d == 0 ? std::complex<double>(g(gen), 0.0) : std::complex<double>(g(gen), g(gen));
  return h;
}

inline oracle::DenseMatrix to_dense(const HermitianBandMatrix& h, std::complex<double> shift) {
  const std::size_t n = h.size();
  oracle::DenseMatrix a(n, std::vector<std::complex<double>>(n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) a[i][j] = h(i, j) - (i == j ? shift : 0.0);
  return a;
}

/// Runs a subcommand in-process on a config text and returns its CSV.
inline std::string run_csv(const Command& cmd, const std::string& yaml, int workers) {
  auto cfg = Config::from_string(yaml);
  RunContext ctx;
  ctx.seed = 3;
  ctx.workers = workers;
  auto res = cmd(*cfg.top, ctx);
  cfg.top->finish();
  return res.table.to_csv();
}

inline CheckResult infrastructure(const CheckOptions&) {
  CheckResult r{12, "infrastructure", false, 0.0, 1.0, "", 0.0};
  std::size_t bad_det = 0;
  std::size_t bad_eig = 0;
  for (unsigned c = 0; c < 100; ++c) {
    const std::size_t n = 2 + (c * 7) % 63;
    const std::size_t b = std::min<std::size_t>(n - 1, 1 + c % 9);
    const auto h = random_band(n, b, 9000 + c);
    const std::complex<double> z = (c % 2 == 0) ? std::complex<double>(0.1 * (c % 5), 0.0)
                                                : std::complex<double>(0.2, 0.05 + 0.01 * (c % 3));
    const auto ld = shifted_logdet(h, z);
    const auto ref = oracle::dense_logdet(to_dense(h, z));
    if (std::fabs(ld.log_abs - ref.log_abs) > 1e-10 * std::max(1.0, std::fabs(ref.log_abs)) ||
        std::abs(ld.phase - ref.phase) > 1e-10)
      ++bad_det;
    const auto ev = eigenvalues(h).values;
    const auto rev = oracle::dense_eigenvalues(to_dense(h, 0.0));
    double norm = 0.0;
    for (double x : rev) norm = std::max(norm, std::fabs(x));
    for (std::size_t i = 0; i < n; ++i)
      if (std::fabs(ev[i] - rev[i]) > 1e-9 * norm) {
        ++bad_eig;
        break;
      }
  }
  const std::string dos_cfg =
      "ensemble: {kind: simple_band, n: 96, w: 6}\nsamples: 24\nbins: {lo: -2.5, hi: 2.5, count: 25}\n";
  const std::string cp_cfg =
      "ensemble: {kind: smooth_band, n: 64, w: 4}\nsamples: 40\nxi: [0.3, 1.0]\n";
  bool invariant = true;
  bool rerun = true;
  for (const auto& [cmd, text] : {std::pair<Command, std::string>{cmd_dos, dos_cfg},
                                  std::pair<Command, std::string>{cmd_charpoly, cp_cfg}}) {
    const auto one = run_csv(cmd, text, 1);
    invariant = invariant && one == run_csv(cmd, text, 4) && one == run_csv(cmd, text, 16);
    rerun = rerun && one == run_csv(cmd, text, 1);
  }
  r.value = static_cast<double>(bad_det + bad_eig);
  r.passed = bad_det == 0 && bad_eig == 0 && invariant && rerun;
  r.detail = "oracle mismatches: logdet " + std::to_string(bad_det) + "/100, eigenvalues " +
             std::to_string(bad_eig) + "/100; workers 1/4/16 identical: " +
             (invariant ? "yes" : "no") + "; rerun identical: " + (rerun ? "yes" : "no");
  r.threshold = 0.0;
  return r;
}

}  // namespace checks

struct Check {
  int id;
  std::function<CheckResult(const CheckOptions&)> run;
};

inline const std::vector<Check>& all_checks() {
  static const std::vector<Check> list{
      {1, checks::semicircle},      {2, checks::k0_expansion}, {3, checks::delocalized},
      {4, checks::localized},       {5, checks::intermediate}, {6, checks::mehler},
      {7, checks::mc_vs_transfer},  {8, checks::localized_mc}, {9, checks::r1_limit},
      {10, checks::sigma_gue},      {11, checks::eigen_pairs}, {12, checks::infrastructure},
  };
  return list;
}

/// Runs one check, timing it and turning library errors into a failure.
inline CheckResult run_check(const Check& c, const CheckOptions& o) {
  const auto t0 = std::chrono::steady_clock::now();
  CheckResult r;
  try {
    r = c.run(o);
  } catch (const std::exception& e) {
    r.id = c.id;
    r.name = "check " + std::to_string(c.id);
    r.passed = false;
    r.detail = std::string("error: ") + e.what();
  }
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return r;
}

inline std::string status_line(const CheckResult& r) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%s [%2d] ", r.passed ? "PASS" : "FAIL", r.id);
  return std::string(buf) + r.name + ": " + checks::fmt(r.value) + " (limit " +
         checks::fmt(r.threshold) + ") " + r.detail + " [" + checks::fmt(r.seconds) + " s]";
}

inline nlohmann::json to_json(const CheckResult& r) {
  return {{"id", r.id},           {"name", r.name},       {"passed", r.passed},
          {"value", r.value},     {"threshold", r.threshold}, {"detail", r.detail},
          {"seconds", r.seconds}};
}

}  // namespace rbmlab::cli
