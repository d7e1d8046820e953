#include "jetcartan/scenario.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "jetcartan/covderiv.hpp"
#include "jetcartan/parser.hpp"

namespace jetcartan {

namespace {

using Json = nlohmann::ordered_json;

std::string trim(const std::string& s) {
  std::size_t b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  std::size_t e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == ',' || c == ' ' || c == '\t') {
      if (!cur.empty()) out.push_back(cur);
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  if (!cur.empty()) out.push_back(cur);
  return out;
}

// parses bracketed integer suffixes: "phi[1][2]" -> {"phi", 1, 2}
bool parse_indexed_key(const std::string& key, std::string& base, std::vector<int>& idx) {
  std::size_t b = key.find('[');
  if (b == std::string::npos) return false;
  base = key.substr(0, b);
  idx.clear();
  std::size_t pos = b;
  while (pos < key.size()) {
    if (key[pos] != '[') return false;
    std::size_t close = key.find(']', pos);
    if (close == std::string::npos) return false;
    try {
      idx.push_back(std::stoi(key.substr(pos + 1, close - pos - 1)));
    } catch (...) {
      return false;
    }
    pos = close + 1;
  }
  return !idx.empty();
}

void size_matrix(std::vector<std::vector<std::string>>& m, int n) {
  m.assign(n, std::vector<std::string>(n, ""));
}
void size_cube(std::vector<std::vector<std::vector<std::string>>>& c, int n) {
  c.assign(n, std::vector<std::vector<std::string>>(n, std::vector<std::string>(n, "")));
}

constexpr int kDefaultPoints = 100;

}  // namespace

ScenarioConfig parse_config_text(const std::string& text) {
  ScenarioConfig cfg;
  cfg.plan.count = kDefaultPoints;
  // key/value pairs are collected first; dimension must be known before the
  // indexed keys are placed
  std::vector<std::pair<std::string, std::string>> kv;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::size_t hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    std::size_t eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("config line " + std::to_string(lineno) + ": expected key = value");
    std::string key = trim(line.substr(0, eq));
    std::string value = trim(line.substr(eq + 1));
    if (key.empty() || value.empty())
      throw ConfigError("config line " + std::to_string(lineno) + ": empty key or value");
    kv.emplace_back(key, value);
  }

  for (auto& [key, value] : kv) {
    if (key == "dimension") {
      try {
        cfg.n = std::stoi(value);
      } catch (...) {
        throw ConfigError("config: bad dimension '" + value + "'");
      }
      if (cfg.n < 1 || cfg.n > 4) throw ConfigError("config: dimension must be in 1..4");
    }
  }
  size_matrix(cfg.phi_src, cfg.n);
  for (int i = 0; i < cfg.n; ++i) cfg.phi_src[i][i] = "1";

  auto to_u64 = [](const std::string& v, const char* what) {
    try {
      return static_cast<std::uint64_t>(std::stoull(v));
    } catch (...) {
      throw ConfigError(std::string("config: bad ") + what + " '" + v + "'");
    }
  };
  auto to_double = [](const std::string& v, const char* what) {
    try {
      return std::stod(v);
    } catch (...) {
      throw ConfigError(std::string("config: bad ") + what + " '" + v + "'");
    }
  };
  auto to_range = [&](const std::string& v, const char* what) {
    auto parts = split_list(v);
    if (parts.size() != 2)
      throw ConfigError(std::string("config: ") + what + " wants 'lo hi', got '" + v + "'");
    return std::make_pair(to_double(parts[0], what), to_double(parts[1], what));
  };

  cfg.plan.domain = Box::cube(cfg.n, 0.25, 1.25, -1.0, 1.0);

  for (auto& [key, value] : kv) {
    std::string base;
    std::vector<int> idx;
    if (key == "dimension") {
      continue;
    } else if (key == "name") {
      cfg.name = value;
    } else if (key == "h11") {
      cfg.h11_src = value;
    } else if (key == "seed") {
      cfg.plan.seed = to_u64(value, "seed");
    } else if (key == "points") {
      cfg.plan.count = static_cast<int>(to_u64(value, "points"));
    } else if (key == "abs_tol") {
      cfg.plan.abs_tol = to_double(value, "abs_tol");
    } else if (key == "rel_tol") {
      cfg.plan.rel_tol = to_double(value, "rel_tol");
    } else if (key == "ricci_fields") {
      cfg.ricci_fields = static_cast<int>(to_u64(value, "ricci_fields"));
    } else if (key == "tasks") {
      cfg.tasks = split_list(value);
    } else if (key == "domain.t") {
      cfg.plan.domain.t = to_range(value, "domain.t");
    } else if (key.rfind("domain.x", 0) == 0 || key.rfind("domain.y", 0) == 0) {
      bool is_x = key[7] == 'x';
      int ci = 0;
      try {
        ci = std::stoi(key.substr(8));
      } catch (...) {
        throw ConfigError("config: bad domain key '" + key + "'");
      }
      if (ci < 1 || ci > cfg.n) throw ConfigError("config: domain index out of range in " + key);
      (is_x ? cfg.plan.domain.x : cfg.plan.domain.y)[ci - 1] = to_range(value, key.c_str());
    } else if (parse_indexed_key(key, base, idx)) {
      auto in_range = [&](int v) { return v >= 1 && v <= cfg.n; };
      if (base == "phi" && idx.size() == 2 && in_range(idx[0]) && in_range(idx[1])) {
        cfg.phi_src[idx[0] - 1][idx[1] - 1] = value;
      } else if (base == "G" && idx.size() == 2 && in_range(idx[0]) && in_range(idx[1])) {
        if (cfg.G_src.empty()) size_matrix(cfg.G_src, cfg.n);
        cfg.G_src[idx[0] - 1][idx[1] - 1] = value;
      } else if ((base == "L" || base == "C") && idx.size() == 3 && in_range(idx[0]) &&
                 in_range(idx[1]) && in_range(idx[2])) {
        auto& cube = base == "L" ? cfg.L_src : cfg.C_src;
        if (cube.empty()) size_cube(cube, cfg.n);
        cube[idx[0] - 1][idx[1] - 1][idx[2] - 1] = value;
      } else {
        throw ConfigError("config: unknown or malformed key '" + key + "'");
      }
    } else {
      throw ConfigError("config: unknown key '" + key + "'");
    }
  }

  // symmetric completion of phi: the given triangle wins
  for (int i = 0; i < cfg.n; ++i)
    for (int j = 0; j < cfg.n; ++j)
      if (cfg.phi_src[i][j].empty()) cfg.phi_src[i][j] = cfg.phi_src[j][i];
  for (int i = 0; i < cfg.n; ++i)
    for (int j = 0; j < cfg.n; ++j)
      if (cfg.phi_src[i][j].empty()) cfg.phi_src[i][j] = "0";

  static const std::vector<std::string> known{"christoffel", "nlc",        "connection",
                                              "tables",      "identities", "verify"};
  for (const auto& t : cfg.tasks)
    if (std::find(known.begin(), known.end(), t) == known.end())
      throw ConfigError("config: unknown task '" + t + "'");
  return cfg;
}

ScenarioConfig parse_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file: " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  ScenarioConfig cfg = parse_config_text(ss.str());
  if (cfg.name == "scenario") {
    std::size_t slash = path.find_last_of('/');
    cfg.name = slash == std::string::npos ? path : path.substr(slash + 1);
  }
  return cfg;
}

std::vector<std::string> builtin_scenario_names() {
  return {"flat", "sphere2d", "exp-time", "random-cartan"};
}

ScenarioConfig builtin_scenario(const std::string& name, int dim) {
  ScenarioConfig cfg;
  cfg.name = name;
  cfg.n = dim;
  cfg.plan.count = kDefaultPoints;
  if (name == "flat") {
    cfg.h11_src = "1";
    size_matrix(cfg.phi_src, cfg.n);
    for (int i = 0; i < cfg.n; ++i)
      for (int j = 0; j < cfg.n; ++j) cfg.phi_src[i][j] = i == j ? "1" : "0";
    cfg.plan.domain = Box::cube(cfg.n, 0.25, 1.25, -1.0, 1.0);
  } else if (name == "sphere2d") {
    cfg.n = 2;
    cfg.h11_src = "t^2";
    size_matrix(cfg.phi_src, 2);
    cfg.phi_src = {{"1", "0"}, {"0", "sin(x1)^2"}};
    cfg.plan.domain = Box::cube(2, 0.5, 1.5, -1.0, 1.0);
    cfg.plan.domain.x[0] = {0.35, 2.79};  // sin(x1) bounded away from 0
  } else if (name == "exp-time") {
    cfg.n = 2;
    cfg.h11_src = "exp(2*t)";
    size_matrix(cfg.phi_src, 2);
    cfg.phi_src = {{"1", "0"}, {"0", "1"}};
    cfg.plan.domain = Box::cube(2, -0.5, 0.5, -1.0, 1.0);
  } else if (name == "random-cartan") {
    cfg.randomized = true;
    cfg.plan.domain = Box::cube(cfg.n, 0.25, 1.25, -0.75, 0.75);
  } else {
    throw ConfigError("unknown scenario '" + name + "'; known: flat, sphere2d, exp-time, "
                      "random-cartan");
  }
  return cfg;
}

namespace {

struct ScenarioObjects {
  std::optional<TemporalMetric> h;
  std::optional<SpatialMetric> phi;
  GammaConnection conn;
  std::string connection_kind;
};

ScenarioObjects build_objects(const ScenarioConfig& cfg) {
  ScenarioObjects obj;
  const int n = cfg.n;
  if (cfg.randomized) {
    Rng rng(cfg.plan.seed);
    obj.h = random_temporal_metric(rng);
    NonlinearConnection nlc = random_nlc(rng, n);
    HNormalData data{*obj.h, {}, {}, {}};
    HNormalData rnd = random_cartan_data(rng, n);
    data.G = rnd.G;
    data.L = rnd.L;
    data.C = rnd.C;
    obj.conn = make_h_normal_cartan(data, nlc);
    obj.connection_kind = "random h-normal Cartan connection over a random nonlinear connection";
    return obj;
  }

  auto parse = [&](const std::string& src, const char* what) {
    try {
      return parse_expr(src, n);
    } catch (const ParseError& e) {
      throw ConfigError(std::string("config: cannot parse ") + what + " '" + src +
                        "': " + e.what());
    }
  };

  obj.h.emplace(parse(cfg.h11_src, "h11"));
  ExprMatrix phi(n, std::vector<Expr>(n, Expr::rational(0)));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) phi[i][j] = parse(cfg.phi_src[i][j], "phi");
  try {
    obj.phi.emplace(n, phi);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }

  bool custom = !cfg.G_src.empty() || !cfg.L_src.empty() || !cfg.C_src.empty();
  try {
    if (!custom) {
      obj.conn = berwald(*obj.h, *obj.phi);
      obj.connection_kind = "Berwald connection of (h11, phi)";
    } else {
      DTensor gamma = spatial_christoffel(*obj.phi);
      ExprMatrix G(n, std::vector<Expr>(n, Expr::rational(0)));
      ExprCube L(n, G), C(n, G);
      for (int k = 0; k < n; ++k)
        for (int i = 0; i < n; ++i) {
          if (!cfg.G_src.empty() && !cfg.G_src[k][i].empty())
            G[k][i] = parse(cfg.G_src[k][i], "G");
          for (int j = 0; j < n; ++j) {
            L[k][i][j] = !cfg.L_src.empty() && !cfg.L_src[k][i][j].empty()
                             ? parse(cfg.L_src[k][i][j], "L")
                             : gamma.at({k, i, j});
            if (!cfg.C_src.empty() && !cfg.C_src[k][i][j].empty())
              C[k][i][j] = parse(cfg.C_src[k][i][j], "C");
          }
        }
      HNormalData data{*obj.h, std::move(G), std::move(L), std::move(C)};
      obj.conn = make_h_normal_cartan(data, canonical_nlc(*obj.h, *obj.phi));
      obj.connection_kind = "custom h-normal Cartan connection over the canonical nonlinear "
                            "connection";
    }
  } catch (const SymmetryViolation& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
  return obj;
}

ResidualTensor flat_row(const std::string& name, const std::string& group,
                        std::vector<Expr> lhs_exprs, std::vector<Expr> rhs_exprs) {
  ResidualTensor rt;
  rt.name = name;
  rt.group = group;
  rt.index_names = {"flat"};
  rt.extents = {static_cast<int>(lhs_exprs.size())};
  rt.lhs = std::move(lhs_exprs);
  rt.rhs = std::move(rhs_exprs);
  rt.residual.reserve(rt.lhs.size());
  for (std::size_t i = 0; i < rt.lhs.size(); ++i)
    rt.residual.push_back(simplify(rt.lhs[i] - rt.rhs[i]));
  return rt;
}

ResidualTensor oracle_vs_table_row(const std::string& name, const FrameTensor& oracle,
                                   const FrameTensor& table) {
  return flat_row(name, "oracle", oracle.comp, table.comp);
}

bool has_task(const ScenarioConfig& cfg, const std::string& t) {
  return std::find(cfg.tasks.begin(), cfg.tasks.end(), t) != cfg.tasks.end();
}

}  // namespace

ScenarioResult run_scenario(const ScenarioConfig& cfg, bool allow_suspect) {
  cfg.plan.validate();
  ScenarioObjects obj = build_objects(cfg);
  const int n = cfg.n;

  std::vector<ResidualTensor> rows;
  if (has_task(cfg, "connection") || has_task(cfg, "tables") || has_task(cfg, "identities") ||
      has_task(cfg, "verify")) {
    auto hres = h_normal_condition_residuals(obj.conn, *obj.h);
    std::vector<Expr> hzero(hres.size(), Expr::rational(0));
    rows.push_back(flat_row("HNormal-Check", "check", std::move(hres), std::move(hzero)));
    // deflection closed forms against the Liouville covariant derivatives
    Deflections df = deflections(obj.conn);
    DTensor lv = liouville(n);
    DTensor via_t = cov_deriv(lv, obj.conn, DerivKind::Temporal);
    DTensor via_x = cov_deriv(lv, obj.conn, DerivKind::Spatial);
    DTensor via_y = cov_deriv(lv, obj.conn, DerivKind::Vertical);
    std::vector<Expr> lhs, rhs;
    for (std::size_t i = 0; i < df.time.size(); ++i) {
      lhs.push_back(df.time[i]);
      rhs.push_back(via_t[i]);
    }
    for (std::size_t i = 0; i < df.space.size(); ++i) {
      lhs.push_back(df.space[i]);
      rhs.push_back(via_x[i]);
    }
    for (std::size_t i = 0; i < df.vert.size(); ++i) {
      lhs.push_back(df.vert[i]);
      rhs.push_back(via_y[i]);
    }
    rows.push_back(flat_row("Deflection-Consistency", "check", std::move(lhs), std::move(rhs)));
  }

  if (has_task(cfg, "tables") || has_task(cfg, "identities") || has_task(cfg, "verify")) {
    FrameTensor tf = torsion_frame(obj.conn);
    FrameTensor rf = curvature_frame(obj.conn);
    rows.push_back(oracle_vs_table_row("TorsionOracle-vs-Table", tf,
                                       torsion_frame_from_table(torsion_table(obj.conn), n)));
    rows.push_back(oracle_vs_table_row("CurvatureOracle-vs-Table", rf,
                                       curvature_frame_from_table(curvature_table(obj.conn), n)));
  }

  if (has_task(cfg, "identities") || has_task(cfg, "verify")) {
    Rng xr(cfg.plan.seed ^ 0x5eedf1e1d5ULL);
    for (int f = 0; f < cfg.ricci_fields; ++f) {
      VectorField X = random_dvector_field(xr, n);
      std::string suffix = cfg.ricci_fields > 1 ? "[X" + std::to_string(f + 1) + "]" : "";
      auto rr = ricci_residuals(obj.conn, X, suffix);
      rows.insert(rows.end(), rr.begin(), rr.end());
    }
    auto dd = deflection_identity_residuals(obj.conn);
    rows.insert(rows.end(), dd.begin(), dd.end());
    auto bb = bianchi_residuals(obj.conn);
    rows.insert(rows.end(), bb.begin(), bb.end());
    auto gg = general_bianchi_residuals(obj.conn);
    rows.insert(rows.end(), gg.begin(), gg.end());
  }

  ScenarioResult result;
  PointPredicate valid;
  if (obj.h && obj.phi) valid = metric_validity(*obj.h, *obj.phi);

  bool verified = has_task(cfg, "verify");
  if (verified) {
    result.report = verify(rows, cfg.plan, valid);
    apply_suspect_policy(result.report);
  } else {
    for (const auto& rt : rows) {
      IdentityResult row;
      row.name = rt.name;
      row.group = rt.group;
      row.star = rt.star;
      row.components = static_cast<int>(rt.size());
      row.pass = true;
      row.note = "not verified (verify task not requested)";
      result.report.rows.push_back(row);
    }
  }

  // exit status: failures that are SUSPECT are tolerated under allow_suspect
  bool ok = true;
  for (const auto& r : result.report.rows) {
    if (r.pass) continue;
    if (r.suspect && allow_suspect) continue;
    ok = false;
  }
  result.exit_code = ok ? 0 : 1;

  // structured report
  Json doc;
  doc["scenario"] = cfg.name;
  doc["dimension"] = n;
  doc["connection"] = obj.connection_kind;
  doc["seed"] = cfg.plan.seed;
  doc["points"] = cfg.plan.count;
  doc["abs_tol"] = cfg.plan.abs_tol;
  doc["rel_tol"] = cfg.plan.rel_tol;
  doc["tasks"] = cfg.tasks;
  doc["verified"] = verified;
  Json ids = Json::array();
  int npass = 0, nfail = 0, nsus = 0;
  for (const auto& r : result.report.rows) {
    Json row;
    row["name"] = r.name;
    row["group"] = r.group;
    if (r.star) row["star"] = true;
    row["components"] = r.components;
    if (verified) {
      row["max_abs"] = r.max_abs;
      row["max_rel"] = r.max_rel;
      Json wp;
      wp["t"] = r.worst.t;
      wp["x"] = r.worst.x;
      wp["y"] = r.worst.y;
      row["worst_point"] = wp;
    }
    row["verdict"] = r.pass ? "pass" : "fail";
    if (r.suspect) row["suspect"] = true;
    if (!r.note.empty()) row["note"] = r.note;
    ids.push_back(row);
    if (r.pass)
      ++npass;
    else if (r.suspect)
      ++nsus;
    else
      ++nfail;
  }
  doc["identities"] = ids;
  Json summary;
  summary["total"] = result.report.rows.size();
  summary["pass"] = npass;
  summary["fail"] = nfail;
  summary["suspect"] = nsus;
  summary["points_used"] = result.report.points_used;
  summary["resample_events"] = result.report.resample_events;
  doc["summary"] = summary;
  result.json = doc.dump(2) + "\n";

  // text summary
  std::ostringstream txt;
  txt << "scenario: " << cfg.name << " (n=" << n << ", seed=" << cfg.plan.seed
      << ", points=" << cfg.plan.count << ")\n";
  txt << "connection: " << obj.connection_kind << "\n";
  if (verified) {
    char buf[160];
    for (const auto& r : result.report.rows) {
      std::snprintf(buf, sizeof(buf), "  %-28s %-7s max_abs=%-12.3e max_rel=%-12.3e%s\n",
                    r.name.c_str(), r.pass ? "pass" : (r.suspect ? "SUSPECT" : "FAIL"), r.max_abs,
                    r.max_rel, r.star ? " *" : "");
      txt << buf;
    }
    txt << "summary: " << npass << "/" << result.report.rows.size() << " pass, " << nsus
        << " suspect, " << nfail << " fail; " << result.report.points_used << " points ("
        << result.report.resample_events << " resampled)\n";
  } else {
    txt << "built " << result.report.rows.size()
        << " residual families (verify task not requested)\n";
  }
  result.text = txt.str();
  return result;
}

std::string tables_text(const ScenarioConfig& cfg, bool emit_symbolic) {
  ScenarioObjects obj = build_objects(cfg);
  TorsionTable tt = torsion_table(obj.conn);
  CurvatureTable ct = curvature_table(obj.conn);

  std::ostringstream out;
  out << "scenario: " << cfg.name << " (n=" << cfg.n << ")\n";
  auto dump = [&](const char* name, const DTensor& d) {
    int nonzero = 0;
    for (std::size_t i = 0; i < d.size(); ++i)
      if (!d[i].is_zero()) ++nonzero;
    out << name << " [" << d.signature_str() << "]: " << nonzero << "/" << d.size()
        << " nonzero components\n";
    if (!emit_symbolic || nonzero == 0) return;
    for (std::size_t i = 0; i < d.size(); ++i) {
      if (d[i].is_zero()) continue;
      auto idx = d.unflatten(i);
      out << "  " << name << "(";
      for (std::size_t s = 0; s < idx.size(); ++s)
        out << (s ? "," : "") << idx[s] + (slot_is_time(d.signature()[s]) ? 0 : 1);
      out << ") = " << to_dsl(d[i]) << "\n";
    }
  };
  out << "torsion components:\n";
  dump("T_time", tt.T_time);
  dump("R_time", tt.R_time);
  dump("T_space", tt.T_space);
  dump("R_space", tt.R_space);
  dump("P_time", tt.P_time);
  dump("P_chor", tt.P_chor);
  dump("P_space", tt.P_space);
  dump("S_vert", tt.S_vert);
  out << "curvature components:\n";
  dump("R_time", ct.R_time);
  dump("R_space", ct.R_space);
  dump("P_time", ct.P_time);
  dump("P_space", ct.P_space);
  dump("S_vert", ct.S_vert);
  return out.str();
}

std::vector<std::string> list_identities() {
  std::vector<std::string> names;
  for (const char* blk : {"hR", "hM", "v"})
    for (int i = 1; i <= 5; ++i)
      names.push_back(std::string("Ricci-") + blk + "-" + std::to_string(i));
  for (int i = 1; i <= 5; ++i) names.push_back("Defl-" + std::to_string(i));
  for (int i = 1; i <= 19; ++i) {
    char buf[16];
    std::snprintf(buf, sizeof(buf), "Bianchi-%02d", i);
    names.push_back(buf);
  }
  names.push_back("GenBianchi-1");
  names.push_back("GenBianchi-2");
  return names;
}

}  // namespace jetcartan
