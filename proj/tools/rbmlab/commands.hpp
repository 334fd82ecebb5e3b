#pragma once

// Subcommand implementations. Each reads its block of the config, runs the
// computation and returns a result table plus metadata fields.

#include <cmath>
#include <complex>
#include <cstdint>
#include <functional>
#include <map>
#include <nlohmann/json.hpp>
#include <numbers>
#include <string>
#include <vector>

#include "rbmlab/core/quadrature.hpp"
#include "rbmlab/rbmlab.hpp"
#include "config.hpp"
#include "table.hpp"

namespace rbmlab::cli {

struct RunContext {
  std::uint64_t seed = 0;
  int workers = 1;
  bool no_edge_renorm = false;
};

struct CommandResult {
  ResultTable table{{}};
  nlohmann::json extra = nlohmann::json::object();
  std::vector<std::string> warnings;
  int exit_code = 0;
};

using Command = std::function<CommandResult(Section&, const RunContext&)>;

namespace detail {

inline EnsembleSpec read_ensemble(Section& cfg, const RunContext& ctx) {
  auto& s = cfg.child("ensemble");
  const auto kind_name = s.get<std::string>("kind", "simple_band");
  EnsembleKind kind;
  try {
    kind = parse_ensemble_kind(kind_name);
  } catch (const InvalidArgument&) {
    throw ConfigError("ensemble.kind must be simple_band, smooth_band or block_band");
  }
  const auto n = s.required<std::size_t>("n");
  const auto w = s.required<std::size_t>("w");
  std::optional<double> alpha;
  if (kind == EnsembleKind::kBlockBand) alpha = s.required<double>("alpha");
  ProfileOptions opt;
  opt.edge_renorm = s.get<bool>("edge_renorm", true);
  if (ctx.no_edge_renorm) {
    opt.edge_renorm = false;
    s.record("edge_renorm", false);
  }
  opt.tau_cut = s.get<double>("tau_cut", opt.tau_cut);
  return {build_variance_profile(kind, n, w, alpha, opt), ctx.seed};
}

inline std::vector<double> read_edges(Section& cfg, const std::string& key, double lo, double hi,
                                      std::size_t count) {
  auto& s = cfg.child(key);
  lo = s.get<double>("lo", lo);
  hi = s.get<double>("hi", hi);
  count = s.get<std::size_t>("count", count);
  if (!(hi > lo) || count == 0) throw ConfigError(key + ": need hi > lo and count >= 1");
  return uniform_edges(lo, hi, count);
}

inline double bulk_energy(Section& cfg) {
  const double e = cfg.get<double>("E", 0.0);
  if (!(std::fabs(e) < 2.0)) throw ConfigError("E must lie inside the bulk, |E| < 2");
  return e;
}

inline R2Options read_r2_options(Section& cfg) {
  R2Options opt;
  opt.eps_ladder = cfg.get<std::vector<double>>("eps_ladder", opt.eps_ladder);
  opt.h = cfg.get<double>("h", opt.h);
  if (opt.eps_ladder.empty()) throw ConfigError("eps_ladder must not be empty");
  return opt;
}

inline CosetOperator::Basis read_basis(Section& cfg) {
  const auto b = cfg.get<std::string>("basis", "legendre");
  if (b == "legendre") return CosetOperator::Basis::kLegendre;
  if (b == "nystrom") return CosetOperator::Basis::kNystrom;
  throw ConfigError("basis must be legendre or nystrom");
}

inline PhaseForm read_phase(Section& cfg) {
  const auto p = cfg.get<std::string>("phase", "exact");
  if (p == "exact") return PhaseForm::kExact;
  if (p == "first_order") return PhaseForm::kFirstOrder;
  throw ConfigError("phase must be exact or first_order");
}

}  // namespace detail

/// Mean of f over [a, b].
inline double bin_average(const std::function<double(double)>& f, double a, double b) {
  const auto rule = gauss_legendre(16, a, b);
  double s = 0.0;
  for (std::size_t i = 0; i < rule.size(); ++i) s += rule.weights[i] * f(rule.nodes[i]);
  return s / (b - a);
}

inline CommandResult cmd_dos(Section& cfg, const RunContext& ctx) {
  const auto spec = detail::read_ensemble(cfg, ctx);
  const auto samples = cfg.get<std::size_t>("samples", 50);
  const auto edges = detail::read_edges(cfg, "bins", -2.5, 2.5, 50);
  const auto h = dos_histogram(spec, edges, samples, ctx.workers);
  CommandResult out;
  out.table = ResultTable({"e_lo", "e_hi", "e_center", "density", "std_error", "rho_sc"});
  for (std::size_t i = 0; i < h.bins(); ++i)
    out.table.row().add(edges[i]).add(edges[i + 1]).add(h.center(i)).add(h.density[i])
        .add(h.std_error[i]).add(bin_average(rho_sc, edges[i], edges[i + 1]));
  out.extra["samples_used"] = h.samples_used;
  out.extra["samples_skipped"] = h.samples_skipped;
  out.extra["mass"] = h.mass();
  if (h.samples_skipped) out.warnings.push_back("eigensolver failed on some samples; skipped");
  return out;
}

inline CommandResult cmd_charpoly(Section& cfg, const RunContext& ctx) {
  const auto spec = detail::read_ensemble(cfg, ctx);
  const double e = detail::bulk_energy(cfg);
  const auto xis = cfg.get<std::vector<double>>("xi", {0.25, 1.0});
  const auto samples = cfg.get<std::size_t>("samples", 1000);
  const auto est = charpoly_ratio(spec, e, xis, samples, ctx.workers);
  CommandResult out;
  out.table = ResultTable(ResultTable::expand(
      {"xi", "ratio:c", "std_error", "count", "effective_samples", "resampled", "sine_kernel",
       "transfer:c"}));
  nlohmann::json offsets = nlohmann::json::array();
  for (std::size_t k = 0; k < xis.size(); ++k) {
    TransferOptions topt;
    topt.check_doubling = false;
    const auto ref = transfer_ratio(spec.profile.size(), static_cast<double>(spec.profile.bandwidth()),
                                    e, xis[k], topt);
    out.table.row().add(xis[k]).add(est[k].mean).add(est[k].std_error).add(est[k].count)
        .add(est[k].effective_samples).add(est[k].resampled).add(sine_kernel_ratio(xis[k])).add(ref.value);
    offsets.push_back(est[k].exponent_offset);
  }
  out.extra["exponent_offset"] = offsets;
  return out;
}

inline CommandResult cmd_r1(Section& cfg, const RunContext& ctx) {
  const auto spec = detail::read_ensemble(cfg, ctx);
  SpectralArgs args;
  args.E = detail::bulk_energy(cfg);
  args.eps = cfg.get<double>("eps", 1.0);
  const auto xis = cfg.get<std::vector<double>>("xi", {1.0});
  const auto samples = cfg.get<std::size_t>("samples", 1024);
  const auto groups = cfg.get<std::size_t>("groups", 16);
  CommandResult out;
  out.table = ResultTable(ResultTable::expand(
      {"xi", "value:c", "spread", "count", "groups", "limit:c", "regime_warning"}));
  for (double xi : xis) {
    args.xi = xi;
    const auto r = r1_ratio(spec, args, samples, ctx.workers, groups);
    out.table.row().add(xi).add(r.value).add(r.spread).add(r.count).add(r.groups)
        .add(std::exp(xi * g_plus(args.E))).add(args.r1_regime_warning());
  }
  if (args.r1_regime_warning()) out.warnings.push_back("|E| outside the first-correlator regime");
  return out;
}

inline CommandResult cmd_paircorr(Section& cfg, const RunContext& ctx) {
  const auto spec = detail::read_ensemble(cfg, ctx);
  const double e = detail::bulk_energy(cfg);
  const double half_width = cfg.get<double>("half_width", 20.0);
  const auto samples = cfg.get<std::size_t>("samples", 50);
  const auto edges = detail::read_edges(cfg, "bins", 0.0, 3.0, 30);
  const auto h = pair_correlation(spec, e, half_width, edges, samples, ctx.workers);
  const bool warn = SpectralArgs{e, 0.0, 1.0}.sigma_regime_warning();
  CommandResult out;
  out.table = ResultTable({"r_lo", "r_hi", "r_center", "density", "std_error", "gue_r2",
                           "gue_r2_bin_mean", "regime_warning"});
  for (std::size_t i = 0; i < h.bins(); ++i)
    out.table.row().add(edges[i]).add(edges[i + 1]).add(h.center(i)).add(h.density[i])
        .add(h.std_error[i]).add(gue_r2(h.center(i))).add(bin_average(gue_r2, edges[i], edges[i + 1]))
        .add(warn);
  out.extra["samples_used"] = h.samples_used;
  out.extra["samples_skipped"] = h.samples_skipped;
  if (warn) out.warnings.push_back("|E| >= sqrt 2, outside the pair-correlation regime");
  return out;
}

inline CommandResult cmd_k0_spectrum(Section& cfg, const RunContext&) {
  const double e = detail::bulk_energy(cfg);
  const double w = cfg.get<double>("W", 10.0);
  const auto nodes = cfg.get<std::size_t>("J", 128);
  const auto count = cfg.get<std::size_t>("count", 10);
  const double tol = cfg.get<double>("tolerance", 1e-10);
  const auto k = derived_constants(e);
  const auto spec = k0_spectrum(k.t_star, w, nodes, tol);
  CommandResult out;
  out.table = ResultTable({"j", "lambda", "expansion", "abs_diff"});
  const double a = k.t_star * w * w;
  for (std::size_t j = 0; j < std::min(count, spec.values.size()); ++j) {
    const double jj = static_cast<double>(j * (j + 1));
    const double expect = j == 0 ? -std::expm1(-2.0 * a) : 1.0 - jj / a;
    out.table.row().add(j).add(spec.values[j]).add(expect).add(std::fabs(spec.values[j] - expect));
  }
  out.extra["t_star"] = k.t_star;
  out.extra["doubling_delta"] = spec.doubling_delta;
  return out;
}

inline CommandResult cmd_crossover_sweep(Section& cfg, const RunContext&) {
  const double e = detail::bulk_energy(cfg);
  const double w = cfg.get<double>("W", 10.0);
  const double xi = cfg.get<double>("xi", 1.0);
  const auto ns = cfg.get<std::vector<std::uint64_t>>("n", {100, 1000, 10000, 100000});
  TransferOptions opt;
  opt.basis = detail::read_basis(cfg);
  opt.size = cfg.get<std::size_t>("size", opt.size);
  opt.phase = detail::read_phase(cfg);
  const double tol = cfg.get<double>("tolerance", 1e-6);
  const auto k = derived_constants(e);
  CommandResult out;
  out.table = ResultTable(ResultTable::expand(
      {"n", "W", "xi", "C", "ratio:c", "doubling_delta", "sine_kernel", "intermediate:c"}));
  std::vector<double> dist;
  for (auto n : ns) {
    const auto r = transfer_ratio(n, w, e, xi, opt);
    const double c = static_cast<double>(n) / (w * w) / k.t_star;
    out.table.row().add(static_cast<std::int64_t>(n)).add(w).add(xi).add(c).add(r.value)
        .add(r.doubling_delta).add(sine_kernel_ratio(xi)).add(intermediate_limit(c, xi));
    dist.push_back(std::abs(r.value - 1.0));
    if (r.doubling_delta > tol) out.exit_code = 3;
  }
  bool monotone = true;
  for (std::size_t i = 1; i < dist.size(); ++i) monotone = monotone && dist[i] <= dist[i - 1] + 1e-12;
  out.extra["t_star"] = k.t_star;
  out.extra["monotone_toward_one"] = monotone;
  if (!monotone) out.warnings.push_back("ratio is not monotone in n along the sweep");
  if (out.exit_code) out.warnings.push_back("basis doubling changed the ratio beyond tolerance");
  return out;
}

inline CommandResult cmd_mehler(Section& cfg, const RunContext&) {
  const double w = cfg.get<double>("W", 20.0);
  const double c = cfg.get<double>("c", 2.0);
  const auto given = cfg.optional<double>("half_width");
  const double half = given ? *given : mehler_default_half_width(w, c);
  if (!given) cfg.record("half_width", half);
  const auto nodes = cfg.get<std::size_t>("nodes", 256);
  const auto count = cfg.get<std::size_t>("count", 8);
  const auto s = mehler_spectrum(w, c, half, nodes);
  const double pred = mehler_predicted_ratio(w, c);
  CommandResult out;
  out.table = ResultTable({"k", "eigenvalue", "ratio", "predicted_ratio", "abs_diff"});
  for (std::size_t j = 0; j < std::min(count, s.values.size()); ++j) {
    const double ratio = j == 0 ? 1.0 : s.values[j] / s.values[j - 1];
    const double p = j == 0 ? 1.0 : pred;
    out.table.row().add(j).add(s.values[j]).add(ratio).add(p).add(std::fabs(ratio - p));
  }
  out.extra["boundary_mass"] = s.boundary_mass;
  out.extra["truncation_warning"] = s.truncation_warning;
  if (s.truncation_warning) out.warnings.push_back("ground state not negligible at the domain edge");
  return out;
}

inline CommandResult cmd_limits_table(Section& cfg, const RunContext&) {
  const double e = detail::bulk_energy(cfg);
  const auto xis = cfg.get<std::vector<double>>("xi", {0.0, 0.25, 0.5, 1.0});
  const double c = cfg.get<double>("C", 0.0);
  if (c < 0.0) throw ConfigError("C must be nonnegative");
  const bool warn = SpectralArgs{e, 0.0, 1.0}.sigma_regime_warning();
  CommandResult out;
  out.table = ResultTable(ResultTable::expand(
      {"xi", "sine_kernel", "gue_r2", "intermediate:c", "r1_limit:c", "regime_warning"}));
  for (double xi : xis)
    out.table.row().add(xi).add(sine_kernel_ratio(xi)).add(gue_r2(xi)).add(intermediate_limit(c, xi))
        .add(std::exp(xi * g_plus(e))).add(warn);
  out.extra["rho_sc"] = rho_sc(e);
  out.extra["g_plus"] = {g_plus(e).real(), g_plus(e).imag()};
  out.extra["a_plus"] = {a_plus_complex(e).real(), a_plus_complex(e).imag()};
  return out;
}

inline CommandResult cmd_calibrate_c0(Section& cfg, const RunContext&) {
  const double e = detail::bulk_energy(cfg);
  CalibrationOptions opt;
  opt.probes = cfg.get<std::vector<double>>("probes", opt.probes);
  opt.lo = cfg.get<double>("lo", opt.lo);
  opt.hi = cfg.get<double>("hi", opt.hi);
  opt.grid_step = cfg.get<double>("grid_step", opt.grid_step);
  opt.r2 = detail::read_r2_options(cfg);
  const auto cal = calibrate_c0(e, opt);
  const bool warn = SpectralArgs{e, 0.0, 1.0}.sigma_regime_warning();
  CommandResult out;
  out.table = ResultTable({"probe", "r2", "gue_r2", "residual", "regime_warning"});
  for (std::size_t i = 0; i < cal.probes.size(); ++i)
    out.table.row().add(cal.probes[i]).add(gue_r2(cal.probes[i]) + cal.residuals[i])
        .add(gue_r2(cal.probes[i])).add(cal.residuals[i]).add(warn);
  out.extra["c0"] = cal.c0;
  out.extra["c0_source"] = "calibrated";
  out.extra["objective"] = cal.objective;
  return out;
}

inline CommandResult cmd_r2_sigma(Section& cfg, const RunContext&) {
  const double e = detail::bulk_energy(cfg);
  const auto rs = cfg.get<std::vector<double>>("r", {0.25, 0.5, 1.0, 1.5, 2.5});
  const auto opt = detail::read_r2_options(cfg);
  const double tol = cfg.get<double>("tolerance", 1e-4);
  CommandResult out;
  double c0 = 0.0;
  if (auto given = cfg.optional<double>("c0")) {
    c0 = *given;
    out.extra["c0_source"] = "config";
  } else {
    CalibrationOptions copt;
    copt.r2 = opt;
    c0 = calibrate_c0(e, copt).c0;
    out.extra["c0_source"] = "calibrated";
  }
  out.extra["c0"] = c0;
  const bool warn = SpectralArgs{e, 0.0, 1.0}.sigma_regime_warning();
  out.table = ResultTable({"r", "r2", "error_estimate", "gue_r2", "abs_diff", "converged",
                           "regime_warning"});
  for (double r : rs) {
    const auto res = r2_from_generalized(e, 0.5 * r, -0.5 * r, c0, opt);
    const bool ok = res.error_estimate <= tol;
    out.table.row().add(r).add(res.value).add(res.error_estimate).add(gue_r2(r))
        .add(std::fabs(res.value - gue_r2(r))).add(ok).add(warn);
    if (!ok) out.exit_code = 3;
  }
  if (out.exit_code) out.warnings.push_back("eps extrapolation did not reach the tolerance");
  return out;
}

}  // namespace rbmlab::cli
