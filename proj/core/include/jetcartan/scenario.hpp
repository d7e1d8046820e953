#pragma once

#include <optional>
#include <string>

#include "jetcartan/random_inputs.hpp"
#include "jetcartan/verify.hpp"

namespace jetcartan {

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// A scenario: metrics (or a randomized connection), an optional custom
/// (G, L, C) data set, a sampling plan and the tasks to run.
struct ScenarioConfig {
  std::string name = "scenario";
  int n = 2;
  std::string h11_src = "1";
  std::vector<std::vector<std::string>> phi_src;  // upper triangle suffices
  std::vector<std::vector<std::string>> G_src;    // optional [k][i]
  std::vector<std::vector<std::vector<std::string>>> L_src;  // optional [k][i][j]
  std::vector<std::vector<std::vector<std::string>>> C_src;  // optional [k][i][j]
  SamplingPlan plan;
  std::vector<std::string> tasks{"christoffel", "nlc", "connection", "tables",
                                 "identities", "verify"};
  int ricci_fields = 3;

  bool randomized = false;  // random-cartan: connection built from plan.seed
};

/// Flat key = value text; '#' starts a comment. Keys: name, dimension, h11,
/// phi[i][j], G[k][i], L[k][i][j], C[k][i][j], seed, points, abs_tol,
/// rel_tol, ricci_fields, domain.t / domain.xI / domain.yI = "lo hi",
/// tasks = comma- or space-separated list.
ScenarioConfig parse_config_text(const std::string& text);
ScenarioConfig parse_config_file(const std::string& path);

/// Built-in scenarios: flat, sphere2d, exp-time, random-cartan.
ScenarioConfig builtin_scenario(const std::string& name, int dim = 2);
std::vector<std::string> builtin_scenario_names();

struct ScenarioResult {
  VerificationReport report;
  std::string text;  // human-readable summary
  std::string json;  // structured report document (schema in the README)
  int exit_code = 0;  // 0 pass, 1 verification failure
};

ScenarioResult run_scenario(const ScenarioConfig& cfg, bool allow_suspect = false);

/// Symbolic or summary dump of the torsion/curvature tables of the scenario's
/// connection.
std::string tables_text(const ScenarioConfig& cfg, bool emit_symbolic);

/// The verifiable identity families: 15 Ricci + 5 deflection + 19 Bianchi +
/// 2 general frame-indexed families.
std::vector<std::string> list_identities();

}  // namespace jetcartan
