#include <cstdio>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "jetcartan/scenario.hpp"

namespace {

using jetcartan::ConfigError;
using jetcartan::DomainFailure;
using jetcartan::ScenarioConfig;
using jetcartan::ScenarioResult;

struct CommonOpts {
  std::uint64_t seed = 0;
  bool seed_set = false;
  int points = 0;
  double tol = 0.0;
  bool allow_suspect = false;
  std::string json_path;
  int dim = 2;
};

void add_common(CLI::App* cmd, CommonOpts& o) {
  cmd->add_option("--seed", o.seed, "sampling / generator seed")->each([&o](std::string) {
    o.seed_set = true;
  });
  cmd->add_option("--points", o.points, "number of sample points");
  cmd->add_option("--tol", o.tol, "absolute and scale-relative tolerance");
  cmd->add_flag("--allow-suspect", o.allow_suspect,
                "exit 0 when the only failures are SUSPECT printed identities");
  cmd->add_option("--json", o.json_path, "write the structured report to this path");
}

void apply_common(ScenarioConfig& cfg, const CommonOpts& o) {
  if (o.seed_set) cfg.plan.seed = o.seed;
  if (o.points > 0) cfg.plan.count = o.points;
  if (o.tol > 0) {
    cfg.plan.abs_tol = o.tol;
    cfg.plan.rel_tol = o.tol;
  }
}

int emit(const ScenarioResult& result, const std::string& json_path) {
  std::fputs(result.text.c_str(), stdout);
  if (!json_path.empty()) {
    std::ofstream out(json_path, std::ios::binary);
    if (!out) {
      std::cerr << "error: cannot write " << json_path << "\n";
      return 2;
    }
    out << result.json;
  }
  return result.exit_code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"symbolic torsion/curvature tables and machine-verified Ricci, deflection and "
               "Bianchi identities for h-normal Cartan connections on the 1-jet space"};
  app.require_subcommand(0, 1);

  bool list_flag = false;
  app.add_flag("--list-identities", list_flag, "list the verifiable identity families");

  std::string config_path;
  CommonOpts run_opts;
  auto* run = app.add_subcommand("run", "run a scenario from a config file");
  run->add_option("config", config_path, "config file (key = value lines)")->required();
  add_common(run, run_opts);

  std::string check_name;
  CommonOpts check_opts;
  auto* check = app.add_subcommand("check", "run a built-in scenario");
  check->add_option("--scenario", check_name, "flat | sphere2d | exp-time | random-cartan")
      ->required();
  check->add_option("--dim", check_opts.dim, "chart dimension for flat/random-cartan");
  add_common(check, check_opts);

  std::string tables_name;
  bool emit_symbolic = false;
  int tables_dim = 2;
  std::uint64_t tables_seed = 1;
  auto* tables = app.add_subcommand("tables", "print the torsion/curvature tables");
  tables->add_option("--scenario", tables_name, "built-in scenario name")->required();
  tables->add_flag("--emit-symbolic", emit_symbolic, "print every nonzero component");
  tables->add_option("--dim", tables_dim, "chart dimension for flat/random-cartan");
  tables->add_option("--seed", tables_seed, "generator seed for random-cartan");

  auto* list = app.add_subcommand("list-identities", "list the verifiable identity families");

  CLI11_PARSE(app, argc, argv);

  try {
    if (list_flag || list->parsed()) {
      for (const auto& name : jetcartan::list_identities()) std::puts(name.c_str());
      return 0;
    }
    if (run->parsed()) {
      ScenarioConfig cfg = jetcartan::parse_config_file(config_path);
      apply_common(cfg, run_opts);
      return emit(jetcartan::run_scenario(cfg, run_opts.allow_suspect), run_opts.json_path);
    }
    if (check->parsed()) {
      ScenarioConfig cfg = jetcartan::builtin_scenario(check_name, check_opts.dim);
      apply_common(cfg, check_opts);
      return emit(jetcartan::run_scenario(cfg, check_opts.allow_suspect), check_opts.json_path);
    }
    if (tables->parsed()) {
      ScenarioConfig cfg = jetcartan::builtin_scenario(tables_name, tables_dim);
      cfg.plan.seed = tables_seed;
      std::fputs(jetcartan::tables_text(cfg, emit_symbolic).c_str(), stdout);
      return 0;
    }
    std::cout << app.help();
    return 0;
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const DomainFailure& e) {
    std::cerr << "domain failure: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
