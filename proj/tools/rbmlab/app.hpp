#pragma once

// Command-line front end: argument parsing, dispatch, output files and exit
// codes.

#include <CLI11.hpp>

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <string>

#include "commands.hpp"
#include "config.hpp"
#include "validation.hpp"

#ifndef RBMLAB_VERSION
#define RBMLAB_VERSION "unknown"
#endif

namespace rbmlab::cli {

enum ExitCode : int { kOk = 0, kChecksFailed = 1, kConfigError = 2, kConvergenceFailure = 3 };

inline CommandResult cmd_validate(Section& cfg, const RunContext& ctx) {
  std::vector<int> ids;
  for (const auto& c : all_checks()) ids.push_back(c.id);
  ids = cfg.get<std::vector<int>>("criteria", ids);
  CommandResult out;
  out.table = ResultTable({"id", "name", "passed", "value", "threshold"});
  nlohmann::json results = nlohmann::json::array();
  bool all = true;
  for (int id : ids) {
    auto it = std::find_if(all_checks().begin(), all_checks().end(),
                           [&](const Check& c) { return c.id == id; });
    if (it == all_checks().end()) throw ConfigError("criteria: no check with id " + std::to_string(id));
    const auto r = run_check(*it, CheckOptions{ctx.workers});
    std::cerr << status_line(r) << '\n';
    out.table.row().add(r.id).add(r.name).add(r.passed).add(r.value).add(r.threshold);
    results.push_back(to_json(r));
    all = all && r.passed;
  }
  out.extra["results"] = results;
  out.extra["all_passed"] = all;
  std::cout << nlohmann::json{{"all_passed", all}, {"results", results}}.dump(2) << '\n';
  if (!all) out.exit_code = kChecksFailed;
  return out;
}

inline const std::map<std::string, Command>& command_registry() {
  static const std::map<std::string, Command> table{
      {"dos", cmd_dos},
      {"charpoly", cmd_charpoly},
      {"r1", cmd_r1},
      {"paircorr", cmd_paircorr},
      {"k0-spectrum", cmd_k0_spectrum},
      {"crossover-sweep", cmd_crossover_sweep},
      {"mehler", cmd_mehler},
      {"limits-table", cmd_limits_table},
      {"r2-sigma", cmd_r2_sigma},
      {"calibrate-c0", cmd_calibrate_c0},
      {"validate", cmd_validate},
  };
  return table;
}

inline void write_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw std::runtime_error("cannot write " + path.string());
  f << text;
}

inline int run_app(int argc, char** argv) {
  CLI::App app{"Random band matrix experiments"};
  app.set_version_flag("--version", std::string(RBMLAB_VERSION));
  std::string sub;
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::optional<int> workers;
  std::string out_dir = ".";
  bool no_edge_renorm = false;
  std::vector<std::string> names;
  for (const auto& [name, _] : command_registry()) names.push_back(name);
  app.add_option("subcommand", sub, "one of: dos charpoly r1 paircorr k0-spectrum crossover-sweep "
                                    "mehler limits-table r2-sigma calibrate-c0 validate")
      ->required()
      ->check(CLI::IsMember(names));
  app.add_option("--config", config_path, "YAML run configuration")->required();
  app.add_option("--seed", seed, "base seed (overrides the config)");
  app.add_option("--workers", workers, "worker threads (default: RBMLAB_WORKERS or all cores)")
      ->check(CLI::PositiveNumber);
  app.add_option("--out", out_dir, "output directory");
  app.add_flag("--no-edge-renorm", no_edge_renorm, "keep literal band variances at the edges");
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kConfigError;
  }

  try {
    auto cfg = Config::from_file(config_path);
    auto& top = *cfg.top;
    RunContext ctx;
    const auto cfg_seed = top.get<std::uint64_t>("seed", 0);
    ctx.seed = seed ? *seed : cfg_seed;
    top.record("seed", ctx.seed);
    const auto cfg_workers = top.optional<int>("workers");
    ctx.workers = workers ? *workers : cfg_workers ? *cfg_workers : default_workers();
    if (ctx.workers < 1) throw ConfigError("workers must be positive");
    top.record("workers", ctx.workers);
    ctx.no_edge_renorm = no_edge_renorm;

    auto result = command_registry().at(sub)(top, ctx);
    top.finish();

    std::filesystem::create_directories(out_dir);
    const std::filesystem::path base(out_dir);
    write_file(base / (sub + ".csv"), result.table.to_csv());
    nlohmann::json meta{{"command", sub},
                        {"version", RBMLAB_VERSION},
                        {"seed", ctx.seed},
                        {"workers", ctx.workers},
                        {"no_edge_renorm", no_edge_renorm},
                        {"config_file", config_path},
                        {"config", cfg.resolved},
                        {"warnings", result.warnings},
                        {"outputs", result.extra},
                        {"rows", result.table.size()}};
    write_file(base / (sub + ".meta.json"), meta.dump(2) + "\n");
    for (const auto& w : result.warnings) std::cerr << "warning: " << w << '\n';
    return result.exit_code;
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfigError;
  } catch (const InvalidArgument& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfigError;
  } catch (const ConvergenceError& e) {
    std::cerr << "convergence failure: " << e.what() << '\n';
    return kConvergenceFailure;
  }
}

}  // namespace rbmlab::cli
