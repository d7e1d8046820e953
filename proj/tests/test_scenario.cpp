#include <doctest.h>

#include "jetcartan/scenario.hpp"

using namespace jetcartan;

TEST_CASE("config parsing: happy path") {
  std::string text = R"(
# comment
name = demo
dimension = 2
h11 = t^2
phi[1][1] = 1
phi[2][2] = sin(x1)^2
seed = 7
points = 12
abs_tol = 1e-9
rel_tol = 1e-9
domain.t = 0.5 1.5
domain.x1 = 0.4 2.7
tasks = connection, tables, identities, verify
)";
  ScenarioConfig cfg = parse_config_text(text);
  CHECK(cfg.name == "demo");
  CHECK(cfg.n == 2);
  CHECK(cfg.plan.seed == 7);
  CHECK(cfg.plan.count == 12);
  CHECK(cfg.plan.domain.x[0].first == doctest::Approx(0.4));
  CHECK(cfg.phi_src[0][1] == "0");           // symmetric completion fills blanks
  CHECK(cfg.phi_src[1][1] == "sin(x1)^2");
  CHECK(cfg.tasks.size() == 4);
}

TEST_CASE("config parsing: errors") {
  CHECK_THROWS_AS(parse_config_text("dimension = banana"), ConfigError);
  CHECK_THROWS_AS(parse_config_text("frobnicate = 1"), ConfigError);
  CHECK_THROWS_AS(parse_config_text("tasks = dance"), ConfigError);
  CHECK_THROWS_AS(parse_config_text("phi[5][1] = 1"), ConfigError);
  CHECK_THROWS_AS(parse_config_text("this line has no equals\n"), ConfigError);
  CHECK_THROWS_AS(parse_config_file("/nonexistent/path.cfg"), ConfigError);
}

TEST_CASE("asymmetric custom data resolves to a config error naming the triple") {
  std::string text = R"(
dimension = 2
h11 = 1
phi[1][1] = 1
phi[2][2] = 1
L[1][1][2] = y1
tasks = connection
)";
  ScenarioConfig cfg = parse_config_text(text);
  try {
    run_scenario(cfg);
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    CHECK(std::string(e.what()).find("L^1_(1,2)") != std::string::npos);
  }
}

TEST_CASE("builtin scenarios run clean") {
  for (const std::string& name : builtin_scenario_names()) {
    ScenarioConfig cfg = builtin_scenario(name);
    cfg.plan.count = 10;
    cfg.ricci_fields = 1;
    ScenarioResult res = run_scenario(cfg);
    INFO(name);
    CHECK(res.exit_code == 0);
    CHECK(res.report.all_pass());
    CHECK(res.report.suspect_count() == 0);
  }
  CHECK_THROWS_AS(builtin_scenario("nope"), ConfigError);
}

TEST_CASE("custom connection data over the canonical nonlinear connection") {
  std::string text = R"(
dimension = 2
h11 = exp(2*t)
phi[1][1] = 1
phi[2][2] = 1
C[1][1][1] = y1/8
G[1][2] = t/4
points = 10
tasks = connection, tables, identities, verify
)";
  ScenarioConfig cfg = parse_config_text(text);
  cfg.ricci_fields = 1;
  ScenarioResult res = run_scenario(cfg);
  CHECK(res.exit_code == 0);
  CHECK(res.report.all_pass());
}

TEST_CASE("reports are byte-identical under a fixed seed") {
  ScenarioConfig cfg = builtin_scenario("random-cartan");
  cfg.plan.seed = 42;
  cfg.plan.count = 15;
  cfg.ricci_fields = 1;
  ScenarioResult a = run_scenario(cfg);
  ScenarioResult b = run_scenario(cfg);
  CHECK(a.json == b.json);
  CHECK(a.text == b.text);

  cfg.plan.seed = 43;
  ScenarioResult c = run_scenario(cfg);
  CHECK(a.json != c.json);
}

TEST_CASE("identity listing is exactly 15 + 5 + 19 + 2") {
  auto names = list_identities();
  CHECK(names.size() == 41);
  int ricci = 0, defl = 0, bianchi = 0, general = 0;
  for (const auto& n : names) {
    if (n.rfind("Ricci-", 0) == 0) ++ricci;
    if (n.rfind("Defl-", 0) == 0) ++defl;
    if (n.rfind("Bianchi-", 0) == 0) ++bianchi;
    if (n.rfind("GenBianchi-", 0) == 0) ++general;
  }
  CHECK(ricci == 15);
  CHECK(defl == 5);
  CHECK(bianchi == 19);
  CHECK(general == 2);
}

TEST_CASE("tables text dumps the sphere structure") {
  ScenarioConfig cfg = builtin_scenario("sphere2d");
  std::string out = tables_text(cfg, true);
  CHECK(out.find("R_space") != std::string::npos);
  CHECK(out.find("0/4 nonzero") != std::string::npos);
  CHECK(out.find("sin(x1)") != std::string::npos);
}

TEST_CASE("tasks short of verify skip numeric evaluation") {
  ScenarioConfig cfg = builtin_scenario("flat");
  cfg.tasks = {"christoffel", "nlc", "connection", "tables"};
  ScenarioResult res = run_scenario(cfg);
  CHECK(res.exit_code == 0);
  CHECK(res.json.find("\"verified\": false") != std::string::npos);
}
