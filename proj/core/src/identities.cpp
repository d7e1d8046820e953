#include "jetcartan/identities.hpp"

#include <cmath>

#include "jetcartan/covderiv.hpp"
#include "jetcartan/sampling.hpp"

namespace jetcartan {

namespace {

struct Builder {
  ResidualTensor rt;

  Builder(std::string name, std::string group, bool star, std::vector<std::string> index_names,
          std::vector<int> extents) {
    rt.name = std::move(name);
    rt.group = std::move(group);
    rt.star = star;
    rt.index_names = std::move(index_names);
    rt.extents = std::move(extents);
    std::size_t total = 1;
    for (int e : rt.extents) total *= static_cast<std::size_t>(e);
    rt.lhs.assign(total, Expr::rational(0));
    rt.rhs.assign(total, Expr::rational(0));
    rt.residual.assign(total, Expr::rational(0));
  }

  std::size_t flatten(const std::vector<int>& idx) const {
    std::size_t flat = 0;
    for (std::size_t s = 0; s < rt.extents.size(); ++s)
      flat = flat * static_cast<std::size_t>(rt.extents[s]) + static_cast<std::size_t>(idx[s]);
    return flat;
  }

  void set(const std::vector<int>& idx, const Expr& lhs, const Expr& rhs) {
    std::size_t f = flatten(idx);
    rt.lhs[f] = simplify(lhs);
    rt.rhs[f] = simplify(rhs);
    rt.residual[f] = simplify(rt.lhs[f] - rt.rhs[f]);
  }

  ResidualTensor take() { return std::move(rt); }
};

void require_cartan(const GammaConnection& conn, const char* op) {
  if (!conn.h_normal) throw NotHNormal(op);
  if (!conn.cartan)
    throw std::invalid_argument(std::string(op) + ": connection is not of Cartan type");
}

Expr fiber_var(int r) { return Expr::var(Coordinate::fiber(r + 1)); }

bool probe_zero(const Expr& e, int n, double tol) {
  for (const Point& p : probe_points(n, 20)) {
    try {
      if (std::fabs(eval(e, p)) > tol) return false;
    } catch (const EvalDomainError&) {
      return false;
    }
  }
  return true;
}

}  // namespace

DTensor liouville(int n) {
  DTensor c(n, {SlotKind::FiberUpper});
  for (int i = 0; i < n; ++i) c.at({i}) = fiber_var(i);
  return c;
}

Deflections deflections(const GammaConnection& conn) {
  if (!conn.h_normal) throw NotHNormal("deflections");
  const int n = conn.n;
  Expr kappa = conn.Gbar;

  Deflections d{DTensor(n, {SlotKind::FiberUpper, SlotKind::TimeLower}),
                DTensor(n, {SlotKind::FiberUpper, SlotKind::SpaceLower}),
                DTensor(n, {SlotKind::FiberUpper, SlotKind::FiberLower})};
  for (int i = 0; i < n; ++i) {
    std::vector<Expr> tt{-conn.nlc.M[i], -(kappa * fiber_var(i))};
    for (int r = 0; r < n; ++r) tt.push_back(conn.G[i][r] * fiber_var(r));
    d.time.at({i, 0}) = simplify(Expr::sum(std::move(tt)));
    for (int j = 0; j < n; ++j) {
      std::vector<Expr> ts{-conn.nlc.N[i][j]};
      for (int r = 0; r < n; ++r) ts.push_back(conn.L[i][r][j] * fiber_var(r));
      d.space.at({i, j}) = simplify(Expr::sum(std::move(ts)));
      std::vector<Expr> tv;
      if (i == j) tv.push_back(Expr::rational(1));
      for (int r = 0; r < n; ++r) tv.push_back(conn.C[i][r][j] * fiber_var(r));
      d.vert.at({i, j}) = simplify(Expr::sum(std::move(tv)));
    }
  }

  // the closed forms must agree with the covariant derivatives of the
  // Liouville field
  DTensor lv = liouville(n);
  DTensor via_t = cov_deriv(lv, conn, DerivKind::Temporal);
  DTensor via_x = cov_deriv(lv, conn, DerivKind::Spatial);
  DTensor via_y = cov_deriv(lv, conn, DerivKind::Vertical);
  auto check = [&](const Expr& a, const Expr& b, const char* which) {
    Expr delta = a - b;
    if (is_symbolically_zero(delta)) return;
    if (!probe_zero(delta, n, 1e-10))
      throw std::runtime_error(std::string("deflections: closed form disagrees with the "
                                           "Liouville covariant derivative (") +
                               which + ")");
  };
  for (int i = 0; i < n; ++i) {
    check(d.time.at({i, 0}), via_t.at({i, 0}), "temporal");
    for (int j = 0; j < n; ++j) {
      check(d.space.at({i, j}), via_x.at({i, j}), "spatial");
      check(d.vert.at({i, j}), via_y.at({i, j}), "vertical");
    }
  }
  return d;
}

// ---------------------------------------------------------------------------
// Ricci identities
// ---------------------------------------------------------------------------

namespace {

// second covariant derivatives of a rank-1 d-tensor, for the commutators
struct SecondDerivs {
  DTensor d1, dx, dy;
  DTensor dx_d1, d1_dx, dxx, dy_d1, d1_dy, dy_dx, dx_dy, dyy;

  SecondDerivs(const DTensor& X, const GammaConnection& conn)
      : d1(cov_deriv(X, conn, DerivKind::Temporal)),
        dx(cov_deriv(X, conn, DerivKind::Spatial)),
        dy(cov_deriv(X, conn, DerivKind::Vertical)),
        dx_d1(cov_deriv(d1, conn, DerivKind::Spatial)),
        d1_dx(cov_deriv(dx, conn, DerivKind::Temporal)),
        dxx(cov_deriv(dx, conn, DerivKind::Spatial)),
        dy_d1(cov_deriv(d1, conn, DerivKind::Vertical)),
        d1_dy(cov_deriv(dy, conn, DerivKind::Temporal)),
        dy_dx(cov_deriv(dx, conn, DerivKind::Vertical)),
        dx_dy(cov_deriv(dy, conn, DerivKind::Spatial)),
        dyy(cov_deriv(dy, conn, DerivKind::Vertical)) {}
};

// the five commutation identities shared by the h_M and v blocks; `upper0`
// indexes the rank-1 slot (extent n), `coef` multiplies the plain components
std::vector<ResidualTensor> ricci_block(const GammaConnection& conn, const DTensor& X,
                                        const SecondDerivs& sd, const TorsionTable& tt,
                                        const CurvatureTable& ct, const std::string& block,
                                        const std::string& suffix) {
  const int n = conn.n;
  std::vector<ResidualTensor> out;

  {
    Builder b("Ricci-" + block + "-1" + suffix, "ricci", false, {"i", "k"}, {n, n});
    for (int i = 0; i < n; ++i)
      for (int k = 0; k < n; ++k) {
        Expr lhs = sd.dx_d1.at({i, 0, k}) - sd.d1_dx.at({i, k, 0});
        std::vector<Expr> rhs;
        for (int r = 0; r < n; ++r) {
          rhs.push_back(X.at({r}) * ct.R_time.at({i, r, 0, k}));
          rhs.push_back(-(sd.dx.at({i, r}) * tt.T_time.at({r, 0, k})));
          rhs.push_back(-(sd.dy.at({i, r}) * tt.R_time.at({r, 0, k})));
        }
        b.set({i, k}, lhs, Expr::sum(std::move(rhs)));
      }
    out.push_back(b.take());
  }
  {
    Builder b("Ricci-" + block + "-2" + suffix, "ricci", false, {"i", "j", "k"}, {n, n, n});
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k) {
          Expr lhs = sd.dxx.at({i, j, k}) - sd.dxx.at({i, k, j});
          std::vector<Expr> rhs;
          for (int r = 0; r < n; ++r) {
            rhs.push_back(X.at({r}) * ct.R_space.at({i, r, j, k}));
            rhs.push_back(-(sd.dy.at({i, r}) * tt.R_space.at({r, j, k})));
          }
          b.set({i, j, k}, lhs, Expr::sum(std::move(rhs)));
        }
    out.push_back(b.take());
  }
  {
    Builder b("Ricci-" + block + "-3" + suffix, "ricci", false, {"i", "k"}, {n, n});
    for (int i = 0; i < n; ++i)
      for (int k = 0; k < n; ++k) {
        Expr lhs = sd.dy_d1.at({i, 0, k}) - sd.d1_dy.at({i, k, 0});
        std::vector<Expr> rhs;
        for (int r = 0; r < n; ++r) {
          rhs.push_back(X.at({r}) * ct.P_time.at({i, r, 0, k}));
          rhs.push_back(-(sd.dy.at({i, r}) * tt.P_time.at({r, 0, k})));
        }
        b.set({i, k}, lhs, Expr::sum(std::move(rhs)));
      }
    out.push_back(b.take());
  }
  {
    Builder b("Ricci-" + block + "-4" + suffix, "ricci", false, {"i", "j", "k"}, {n, n, n});
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k) {
          Expr lhs = sd.dy_dx.at({i, j, k}) - sd.dx_dy.at({i, k, j});
          std::vector<Expr> rhs;
          for (int r = 0; r < n; ++r) {
            rhs.push_back(X.at({r}) * ct.P_space.at({i, r, j, k}));
            rhs.push_back(-(sd.dx.at({i, r}) * conn.C[r][j][k]));
            rhs.push_back(-(sd.dy.at({i, r}) * tt.P_space.at({r, j, k})));
          }
          b.set({i, j, k}, lhs, Expr::sum(std::move(rhs)));
        }
    out.push_back(b.take());
  }
  {
    Builder b("Ricci-" + block + "-5" + suffix, "ricci", false, {"i", "j", "k"}, {n, n, n});
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k) {
          Expr lhs = sd.dyy.at({i, j, k}) - sd.dyy.at({i, k, j});
          std::vector<Expr> rhs;
          for (int r = 0; r < n; ++r) rhs.push_back(X.at({r}) * ct.S_vert.at({i, r, j, k}));
          b.set({i, j, k}, lhs, Expr::sum(std::move(rhs)));
        }
    out.push_back(b.take());
  }
  return out;
}

}  // namespace

std::vector<ResidualTensor> ricci_residuals(const GammaConnection& conn, const VectorField& X,
                                            const std::string& suffix) {
  require_cartan(conn, "ricci_residuals");
  const int n = conn.n;
  TorsionTable tt = torsion_table(conn);
  CurvatureTable ct = curvature_table(conn);

  std::vector<ResidualTensor> out;

  // h_R block: the time component X^1
  {
    DTensor X1(n, {SlotKind::TimeUpper});
    X1.at({0}) = simplify(X.t_comp);
    SecondDerivs sd(X1, conn);
    {
      Builder b("Ricci-hR-1" + suffix, "ricci", false, {"k"}, {n});
      for (int k = 0; k < n; ++k) {
        Expr lhs = sd.dx_d1.at({0, 0, k}) - sd.d1_dx.at({0, k, 0});
        std::vector<Expr> rhs;
        for (int r = 0; r < n; ++r) {
          rhs.push_back(-(sd.dx.at({0, r}) * tt.T_time.at({r, 0, k})));
          rhs.push_back(-(sd.dy.at({0, r}) * tt.R_time.at({r, 0, k})));
        }
        b.set({k}, lhs, Expr::sum(std::move(rhs)));
      }
      out.push_back(b.take());
    }
    {
      Builder b("Ricci-hR-2" + suffix, "ricci", false, {"j", "k"}, {n, n});
      for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k) {
          Expr lhs = sd.dxx.at({0, j, k}) - sd.dxx.at({0, k, j});
          std::vector<Expr> rhs;
          for (int r = 0; r < n; ++r)
            rhs.push_back(-(sd.dy.at({0, r}) * tt.R_space.at({r, j, k})));
          b.set({j, k}, lhs, Expr::sum(std::move(rhs)));
        }
      out.push_back(b.take());
    }
    {
      Builder b("Ricci-hR-3" + suffix, "ricci", false, {"k"}, {n});
      for (int k = 0; k < n; ++k) {
        Expr lhs = sd.dy_d1.at({0, 0, k}) - sd.d1_dy.at({0, k, 0});
        std::vector<Expr> rhs;
        for (int r = 0; r < n; ++r)
          rhs.push_back(-(sd.dy.at({0, r}) * tt.P_time.at({r, 0, k})));
        b.set({k}, lhs, Expr::sum(std::move(rhs)));
      }
      out.push_back(b.take());
    }
    {
      Builder b("Ricci-hR-4" + suffix, "ricci", false, {"j", "k"}, {n, n});
      for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k) {
          Expr lhs = sd.dy_dx.at({0, j, k}) - sd.dx_dy.at({0, k, j});
          std::vector<Expr> rhs;
          for (int r = 0; r < n; ++r) {
            rhs.push_back(-(sd.dx.at({0, r}) * conn.C[r][j][k]));
            rhs.push_back(-(sd.dy.at({0, r}) * tt.P_space.at({r, j, k})));
          }
          b.set({j, k}, lhs, Expr::sum(std::move(rhs)));
        }
      out.push_back(b.take());
    }
    {
      Builder b("Ricci-hR-5" + suffix, "ricci", false, {"j", "k"}, {n, n});
      for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k) {
          Expr lhs = sd.dyy.at({0, j, k}) - sd.dyy.at({0, k, j});
          b.set({j, k}, lhs, Expr::rational(0));
        }
      out.push_back(b.take());
    }
  }

  // h_M block: the spatial components X^i
  {
    DTensor Xs(n, {SlotKind::SpaceUpper});
    for (int i = 0; i < n; ++i) Xs.at({i}) = simplify(X.x_comp[i]);
    SecondDerivs sd(Xs, conn);
    auto block = ricci_block(conn, Xs, sd, tt, ct, "hM", suffix);
    out.insert(out.end(), block.begin(), block.end());
  }

  // v block: the fiber components X^(i)
  {
    DTensor Xf(n, {SlotKind::FiberUpper});
    for (int i = 0; i < n; ++i) Xf.at({i}) = simplify(X.y_comp[i]);
    SecondDerivs sd(Xf, conn);
    auto block = ricci_block(conn, Xf, sd, tt, ct, "v", suffix);
    out.insert(out.end(), block.begin(), block.end());
  }

  return out;
}

// ---------------------------------------------------------------------------
// deflection identities
// ---------------------------------------------------------------------------

std::vector<ResidualTensor> deflection_identity_residuals(const GammaConnection& conn) {
  require_cartan(conn, "deflection_identity_residuals");
  const int n = conn.n;
  TorsionTable tt = torsion_table(conn);
  CurvatureTable ct = curvature_table(conn);
  Deflections df = deflections(conn);

  DTensor dfT_dx = cov_deriv(df.time, conn, DerivKind::Spatial);
  DTensor dfT_dy = cov_deriv(df.time, conn, DerivKind::Vertical);
  DTensor dfS_dt = cov_deriv(df.space, conn, DerivKind::Temporal);
  DTensor dfS_dx = cov_deriv(df.space, conn, DerivKind::Spatial);
  DTensor dfS_dy = cov_deriv(df.space, conn, DerivKind::Vertical);
  DTensor dfV_dt = cov_deriv(df.vert, conn, DerivKind::Temporal);
  DTensor dfV_dx = cov_deriv(df.vert, conn, DerivKind::Spatial);
  DTensor dfV_dy = cov_deriv(df.vert, conn, DerivKind::Vertical);

  std::vector<ResidualTensor> out;
  {
    Builder b("Defl-1", "deflection", false, {"i", "k"}, {n, n});
    for (int i = 0; i < n; ++i)
      for (int k = 0; k < n; ++k) {
        Expr lhs = dfT_dx.at({i, 0, k}) - dfS_dt.at({i, k, 0});
        std::vector<Expr> rhs;
        for (int r = 0; r < n; ++r) {
          rhs.push_back(fiber_var(r) * ct.R_time.at({i, r, 0, k}));
          rhs.push_back(-(df.space.at({i, r}) * tt.T_time.at({r, 0, k})));
          rhs.push_back(-(df.vert.at({i, r}) * tt.R_time.at({r, 0, k})));
        }
        b.set({i, k}, lhs, Expr::sum(std::move(rhs)));
      }
    out.push_back(b.take());
  }
  {
    Builder b("Defl-2", "deflection", false, {"i", "j", "k"}, {n, n, n});
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k) {
          Expr lhs = dfS_dx.at({i, j, k}) - dfS_dx.at({i, k, j});
          std::vector<Expr> rhs;
          for (int r = 0; r < n; ++r) {
            rhs.push_back(fiber_var(r) * ct.R_space.at({i, r, j, k}));
            rhs.push_back(-(df.vert.at({i, r}) * tt.R_space.at({r, j, k})));
          }
          b.set({i, j, k}, lhs, Expr::sum(std::move(rhs)));
        }
    out.push_back(b.take());
  }
  {
    Builder b("Defl-3", "deflection", false, {"i", "k"}, {n, n});
    for (int i = 0; i < n; ++i)
      for (int k = 0; k < n; ++k) {
        Expr lhs = dfT_dy.at({i, 0, k}) - dfV_dt.at({i, k, 0});
        std::vector<Expr> rhs;
        for (int r = 0; r < n; ++r) {
          rhs.push_back(fiber_var(r) * ct.P_time.at({i, r, 0, k}));
          rhs.push_back(-(df.vert.at({i, r}) * tt.P_time.at({r, 0, k})));
        }
        b.set({i, k}, lhs, Expr::sum(std::move(rhs)));
      }
    out.push_back(b.take());
  }
  {
    Builder b("Defl-4", "deflection", false, {"i", "j", "k"}, {n, n, n});
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k) {
          Expr lhs = dfS_dy.at({i, j, k}) - dfV_dx.at({i, k, j});
          std::vector<Expr> rhs;
          for (int r = 0; r < n; ++r) {
            rhs.push_back(fiber_var(r) * ct.P_space.at({i, r, j, k}));
            rhs.push_back(-(df.space.at({i, r}) * conn.C[r][j][k]));
            rhs.push_back(-(df.vert.at({i, r}) * tt.P_space.at({r, j, k})));
          }
          b.set({i, j, k}, lhs, Expr::sum(std::move(rhs)));
        }
    out.push_back(b.take());
  }
  {
    Builder b("Defl-5", "deflection", false, {"i", "j", "k"}, {n, n, n});
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k) {
          Expr lhs = dfV_dy.at({i, j, k}) - dfV_dy.at({i, k, j});
          std::vector<Expr> rhs;
          for (int r = 0; r < n; ++r) rhs.push_back(fiber_var(r) * ct.S_vert.at({i, r, j, k}));
          b.set({i, j, k}, lhs, Expr::sum(std::move(rhs)));
        }
    out.push_back(b.take());
  }
  return out;
}

// ---------------------------------------------------------------------------
// the nineteen printed Bianchi identities
// ---------------------------------------------------------------------------

std::vector<ResidualTensor> bianchi_residuals(const GammaConnection& conn) {
  require_cartan(conn, "bianchi_residuals");
  const int n = conn.n;
  TorsionTable tt = torsion_table(conn);
  CurvatureTable ct = curvature_table(conn);

  // covariant derivatives of the torsion components
  DTensor T1_dx = cov_deriv(tt.T_time, conn, DerivKind::Spatial);   // T^l_{1j|k}
  DTensor T1_dy = cov_deriv(tt.T_time, conn, DerivKind::Vertical);  // T^l_{1k}|_(p)
  DTensor Rt_dx = cov_deriv(tt.R_time, conn, DerivKind::Spatial);   // R^(l)_(1)1j|k
  DTensor Rt_dy = cov_deriv(tt.R_time, conn, DerivKind::Vertical);  // R^(l)_(1)1k|_(p)
  DTensor Rs_dt = cov_deriv(tt.R_space, conn, DerivKind::Temporal); // R^(l)_(1)jk/1
  DTensor Rs_dx = cov_deriv(tt.R_space, conn, DerivKind::Spatial);  // R^(l)_(1)ij|k
  DTensor Rs_dy = cov_deriv(tt.R_space, conn, DerivKind::Vertical); // R^(l)_(1)jk|_(p)
  DTensor C_dt = cov_deriv(tt.P_chor, conn, DerivKind::Temporal);   // C^l_{k(p)/1}
  DTensor C_dx = cov_deriv(tt.P_chor, conn, DerivKind::Spatial);    // C^l_{j(p)|k}
  DTensor C_dy = cov_deriv(tt.P_chor, conn, DerivKind::Vertical);   // C^l_{i(j)}|_(k)
  DTensor Pt_dx = cov_deriv(tt.P_time, conn, DerivKind::Spatial);   // P^(l)_(1)1(p)|k
  DTensor Pt_dy = cov_deriv(tt.P_time, conn, DerivKind::Vertical);  // P^(l)_(1)1(j)|_(k)
  DTensor Ps_dt = cov_deriv(tt.P_space, conn, DerivKind::Temporal); // P^(l)_(1)k(p)/1
  DTensor Ps_dx = cov_deriv(tt.P_space, conn, DerivKind::Spatial);  // P^(l)_(1)k(p)|j
  DTensor Ps_dy = cov_deriv(tt.P_space, conn, DerivKind::Vertical); // P^(l)_(1)i(k)|_(j)

  // covariant derivatives of the curvature components
  DTensor Rct_dx = cov_deriv(ct.R_time, conn, DerivKind::Spatial);   // R^l_{p1j|k}
  DTensor Rct_dy = cov_deriv(ct.R_time, conn, DerivKind::Vertical);  // R^l_{i1k}|_(p)
  DTensor Rcs_dt = cov_deriv(ct.R_space, conn, DerivKind::Temporal); // R^l_{pjk/1}
  DTensor Rcs_dx = cov_deriv(ct.R_space, conn, DerivKind::Spatial);  // R^l_{pij|k}
  DTensor Rcs_dy = cov_deriv(ct.R_space, conn, DerivKind::Vertical); // R^l_{ijk}|_(p)
  DTensor Pct_dx = cov_deriv(ct.P_time, conn, DerivKind::Spatial);   // P^l_{i1(p)|k}
  DTensor Pct_dy = cov_deriv(ct.P_time, conn, DerivKind::Vertical);  // P^l_{p1(j)}|_(k)
  DTensor Pcs_dt = cov_deriv(ct.P_space, conn, DerivKind::Temporal); // P^l_{ik(p)/1}
  DTensor Pcs_dx = cov_deriv(ct.P_space, conn, DerivKind::Spatial);  // P^l_{ik(p)|j}
  DTensor Pcs_dy = cov_deriv(ct.P_space, conn, DerivKind::Vertical); // P^l_{pi(k)}|_(j)
  DTensor Sc_dt = cov_deriv(ct.S_vert, conn, DerivKind::Temporal);   // S^l_{p(j)(k)/1}
  DTensor Sc_dx = cov_deriv(ct.S_vert, conn, DerivKind::Spatial);    // S^l_{p(j)(k)|i}
  DTensor Sc_dy = cov_deriv(ct.S_vert, conn, DerivKind::Vertical);   // S^l_{p(i)(j)}|_(k)

  std::vector<ResidualTensor> out;
  auto alt = [](auto&& f, int j, int k) { return f(j, k) - f(k, j); };
  auto cyc = [](auto&& f, int i, int j, int k) {
    return Expr::sum({f(i, j, k), f(j, k, i), f(k, i, j)});
  };

  // 1. A_{j,k} { R^l_{j1k} + T^l_{1j|k} + R^(r)_(1)1j C^l_{k(r)} } = 0
  {
    Builder b("Bianchi-01", "bianchi", false, {"l", "j", "k"}, {n, n, n});
    for (int l = 0; l < n; ++l)
      for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k) {
          auto f = [&](int jj, int kk) {
            std::vector<Expr> t{ct.R_time.at({l, jj, 0, kk}), T1_dx.at({l, 0, jj, kk})};
            for (int r = 0; r < n; ++r)
              t.push_back(tt.R_time.at({r, 0, jj}) * conn.C[l][kk][r]);
            return Expr::sum(std::move(t));
          };
          b.set({l, j, k}, alt(f, j, k), Expr::rational(0));
        }
    out.push_back(b.take());
  }
  // 2*. sum_{i,j,k} { R^l_{ijk} - R^(r)_(1)ij C^l_{k(r)} } = 0
  {
    Builder b("Bianchi-02", "bianchi", true, {"l", "i", "j", "k"}, {n, n, n, n});
    for (int l = 0; l < n; ++l)
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
          for (int k = 0; k < n; ++k) {
            auto f = [&](int ii, int jj, int kk) {
              std::vector<Expr> t{ct.R_space.at({l, ii, jj, kk})};
              for (int r = 0; r < n; ++r)
                t.push_back(-(tt.R_space.at({r, ii, jj}) * conn.C[l][kk][r]));
              return Expr::sum(std::move(t));
            };
            b.set({l, i, j, k}, cyc(f, i, j, k), Expr::rational(0));
          }
    out.push_back(b.take());
  }
  // 3. A_{j,k} { R^(l)_(1)1j|k + T^r_{1j} R^(l)_(1)kr + R^(r)_(1)1j P^(l)_(1)k(r) }
  //    = -R^(l)_(1)jk/1 - R^(r)_(1)jk P^(l)_(1)1(r)
  {
    Builder b("Bianchi-03", "bianchi", false, {"l", "j", "k"}, {n, n, n});
    for (int l = 0; l < n; ++l)
      for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k) {
          auto f = [&](int jj, int kk) {
            std::vector<Expr> t{Rt_dx.at({l, 0, jj, kk})};
            for (int r = 0; r < n; ++r) {
              t.push_back(tt.T_time.at({r, 0, jj}) * tt.R_space.at({l, kk, r}));
              t.push_back(tt.R_time.at({r, 0, jj}) * tt.P_space.at({l, kk, r}));
            }
            return Expr::sum(std::move(t));
          };
          std::vector<Expr> rhs{-Rs_dt.at({l, j, k, 0})};
          for (int r = 0; r < n; ++r)
            rhs.push_back(-(tt.R_space.at({r, j, k}) * tt.P_time.at({l, 0, r})));
          b.set({l, j, k}, alt(f, j, k), Expr::sum(std::move(rhs)));
        }
    out.push_back(b.take());
  }
  // 4*. sum_{i,j,k} { R^(l)_(1)ij|k + R^(r)_(1)ij P^(l)_(1)k(r) } = 0
  {
    Builder b("Bianchi-04", "bianchi", true, {"l", "i", "j", "k"}, {n, n, n, n});
    for (int l = 0; l < n; ++l)
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
          for (int k = 0; k < n; ++k) {
            auto f = [&](int ii, int jj, int kk) {
              std::vector<Expr> t{Rs_dx.at({l, ii, jj, kk})};
              for (int r = 0; r < n; ++r)
                t.push_back(tt.R_space.at({r, ii, jj}) * tt.P_space.at({l, kk, r}));
              return Expr::sum(std::move(t));
            };
            b.set({l, i, j, k}, cyc(f, i, j, k), Expr::rational(0));
          }
    out.push_back(b.take());
  }
  // 5. T^l_{1k}|_(p) - C^l_{r(p)} T^r_{1k} + P^l_{k1(p)} + C^l_{k(p)/1}
  //    + C^r_{k(p)} T^l_{1r} - C^l_{k(r)} P^(r)_(1)1(p) = 0
  {
    Builder b("Bianchi-05", "bianchi", false, {"l", "k", "p"}, {n, n, n});
    for (int l = 0; l < n; ++l)
      for (int k = 0; k < n; ++k)
        for (int p = 0; p < n; ++p) {
          std::vector<Expr> t{T1_dy.at({l, 0, k, p}), ct.P_time.at({l, k, 0, p}),
                              C_dt.at({l, k, p, 0})};
          for (int r = 0; r < n; ++r) {
            t.push_back(-(conn.C[l][r][p] * tt.T_time.at({r, 0, k})));
            t.push_back(conn.C[r][k][p] * tt.T_time.at({l, 0, r}));
            t.push_back(-(conn.C[l][k][r] * tt.P_time.at({r, 0, p})));
          }
          b.set({l, k, p}, Expr::sum(std::move(t)), Expr::rational(0));
        }
    out.push_back(b.take());
  }
  // 6*. A_{j,k} { C^l_{j(p)|k} + C^l_{k(r)} P^(r)_(1)j(p) + P^l_{jk(p)} } = 0
  {
    Builder b("Bianchi-06", "bianchi", true, {"l", "p", "j", "k"}, {n, n, n, n});
    for (int l = 0; l < n; ++l)
      for (int p = 0; p < n; ++p)
        for (int j = 0; j < n; ++j)
          for (int k = 0; k < n; ++k) {
            auto f = [&](int jj, int kk) {
              std::vector<Expr> t{C_dx.at({l, jj, p, kk}), ct.P_space.at({l, jj, kk, p})};
              for (int r = 0; r < n; ++r)
                t.push_back(conn.C[l][kk][r] * tt.P_space.at({r, jj, p}));
              return Expr::sum(std::move(t));
            };
            b.set({l, p, j, k}, alt(f, j, k), Expr::rational(0));
          }
    out.push_back(b.take());
  }
  // 7. P^(l)_(1)1(p)|k - P^(l)_(1)k(p)/1 + P^(l)_(1)k(r) P^(r)_(1)1(p)
  //    - P^(l)_(1)1(r) P^(r)_(1)k(p)
  //    = R^(l)_(1)1k|_(p) - R^l_{p1k} + R^(l)_(1)1r C^r_{k(p)} - T^r_{1k} P^(l)_(1)r(p)
  {
    Builder b("Bianchi-07", "bianchi", false, {"l", "p", "k"}, {n, n, n});
    for (int l = 0; l < n; ++l)
      for (int p = 0; p < n; ++p)
        for (int k = 0; k < n; ++k) {
          std::vector<Expr> lhs{Pt_dx.at({l, 0, p, k}), -Ps_dt.at({l, k, p, 0})};
          for (int r = 0; r < n; ++r) {
            lhs.push_back(tt.P_space.at({l, k, r}) * tt.P_time.at({r, 0, p}));
            lhs.push_back(-(tt.P_time.at({l, 0, r}) * tt.P_space.at({r, k, p})));
          }
          std::vector<Expr> rhs{Rt_dy.at({l, 0, k, p}), -ct.R_time.at({l, p, 0, k})};
          for (int r = 0; r < n; ++r) {
            rhs.push_back(tt.R_time.at({l, 0, r}) * conn.C[r][k][p]);
            rhs.push_back(-(tt.T_time.at({r, 0, k}) * tt.P_space.at({l, r, p})));
          }
          b.set({l, p, k}, Expr::sum(std::move(lhs)), Expr::sum(std::move(rhs)));
        }
    out.push_back(b.take());
  }
  // 8*. A_{j,k} { R^(l)_(1)jr C^r_{k(p)} + P^(l)_(1)j(r) P^(r)_(1)k(p) + P^(l)_(1)k(p)|j }
  //     = R^l_{pjk} - R^(l)_(1)jk|_(p)
  {
    Builder b("Bianchi-08", "bianchi", true, {"l", "p", "j", "k"}, {n, n, n, n});
    for (int l = 0; l < n; ++l)
      for (int p = 0; p < n; ++p)
        for (int j = 0; j < n; ++j)
          for (int k = 0; k < n; ++k) {
            auto f = [&](int jj, int kk) {
              std::vector<Expr> t{Ps_dx.at({l, kk, p, jj})};
              for (int r = 0; r < n; ++r) {
                t.push_back(tt.R_space.at({l, jj, r}) * conn.C[r][kk][p]);
                t.push_back(tt.P_space.at({l, jj, r}) * tt.P_space.at({r, kk, p}));
              }
              return Expr::sum(std::move(t));
            };
            Expr rhs = ct.R_space.at({l, p, j, k}) - Rs_dy.at({l, j, k, p});
            b.set({l, p, j, k}, alt(f, j, k), rhs);
          }
    out.push_back(b.take());
  }
  // 9*. A_{j,k} { C^l_{i(j)}|_(k) + C^r_{i(k)} C^l_{r(j)} } = S^l_{i(j)(k)}
  //     (the printed middle form, with the fiber derivative read as d/dy, is
  //     the definition of S and needs no separate residual)
  {
    Builder b("Bianchi-09", "bianchi", true, {"l", "i", "j", "k"}, {n, n, n, n});
    for (int l = 0; l < n; ++l)
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
          for (int k = 0; k < n; ++k) {
            auto f = [&](int jj, int kk) {
              std::vector<Expr> t{C_dy.at({l, i, jj, kk})};
              for (int r = 0; r < n; ++r)
                t.push_back(conn.C[r][i][kk] * conn.C[l][r][jj]);
              return Expr::sum(std::move(t));
            };
            b.set({l, i, j, k}, alt(f, j, k), ct.S_vert.at({l, i, j, k}));
          }
    out.push_back(b.take());
  }
  // 10. A_{j,k} { P^(l)_(1)1(j)|_(k) + P^l_{j1(k)} } = 0
  {
    Builder b("Bianchi-10", "bianchi", false, {"l", "j", "k"}, {n, n, n});
    for (int l = 0; l < n; ++l)
      for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k) {
          auto f = [&](int jj, int kk) {
            return Pt_dy.at({l, 0, jj, kk}) + ct.P_time.at({l, jj, 0, kk});
          };
          b.set({l, j, k}, alt(f, j, k), Expr::rational(0));
        }
    out.push_back(b.take());
  }
  // 11*. A_{j,k} { P^l_{ji(k)} + P^(l)_(1)r(j) C^r_{i(k)} - P^(l)_(1)i(k)|_(j) } = 0
  {
    Builder b("Bianchi-11", "bianchi", true, {"l", "i", "j", "k"}, {n, n, n, n});
    for (int l = 0; l < n; ++l)
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
          for (int k = 0; k < n; ++k) {
            auto f = [&](int jj, int kk) {
              std::vector<Expr> t{ct.P_space.at({l, jj, i, kk}), -Ps_dy.at({l, i, kk, jj})};
              for (int r = 0; r < n; ++r)
                t.push_back(tt.P_space.at({l, r, jj}) * conn.C[r][i][kk]);
              return Expr::sum(std::move(t));
            };
            b.set({l, i, j, k}, alt(f, j, k), Expr::rational(0));
          }
    out.push_back(b.take());
  }
  // 12*. sum_{i,j,k} S^l_{i(j)(k)} = 0
  {
    Builder b("Bianchi-12", "bianchi", true, {"l", "i", "j", "k"}, {n, n, n, n});
    for (int l = 0; l < n; ++l)
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
          for (int k = 0; k < n; ++k) {
            auto f = [&](int ii, int jj, int kk) { return ct.S_vert.at({l, ii, jj, kk}); };
            b.set({l, i, j, k}, cyc(f, i, j, k), Expr::rational(0));
          }
    out.push_back(b.take());
  }
  // 13. A_{j,k} { R^l_{p1j|k} + T^r_{1j} R^l_{pkr} + R^(r)_(1)1j P^l_{pk(r)} }
  //     = -R^l_{pjk/1} - R^(r)_(1)jk P^l_{p1(r)}
  {
    Builder b("Bianchi-13", "bianchi", false, {"l", "p", "j", "k"}, {n, n, n, n});
    for (int l = 0; l < n; ++l)
      for (int p = 0; p < n; ++p)
        for (int j = 0; j < n; ++j)
          for (int k = 0; k < n; ++k) {
            auto f = [&](int jj, int kk) {
              std::vector<Expr> t{Rct_dx.at({l, p, 0, jj, kk})};
              for (int r = 0; r < n; ++r) {
                t.push_back(tt.T_time.at({r, 0, jj}) * ct.R_space.at({l, p, kk, r}));
                t.push_back(tt.R_time.at({r, 0, jj}) * ct.P_space.at({l, p, kk, r}));
              }
              return Expr::sum(std::move(t));
            };
            std::vector<Expr> rhs{-Rcs_dt.at({l, p, j, k, 0})};
            for (int r = 0; r < n; ++r)
              rhs.push_back(-(tt.R_space.at({r, j, k}) * ct.P_time.at({l, p, 0, r})));
            b.set({l, p, j, k}, alt(f, j, k), Expr::sum(std::move(rhs)));
          }
    out.push_back(b.take());
  }
  // 14*. sum_{i,j,k} { R^l_{pij|k} + R^(r)_(1)ij P^l_{pk(r)} } = 0
  {
    Builder b("Bianchi-14", "bianchi", true, {"l", "p", "i", "j", "k"}, {n, n, n, n, n});
    for (int l = 0; l < n; ++l)
      for (int p = 0; p < n; ++p)
        for (int i = 0; i < n; ++i)
          for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k) {
              auto f = [&](int ii, int jj, int kk) {
                std::vector<Expr> t{Rcs_dx.at({l, p, ii, jj, kk})};
                for (int r = 0; r < n; ++r)
                  t.push_back(tt.R_space.at({r, ii, jj}) * ct.P_space.at({l, p, kk, r}));
                return Expr::sum(std::move(t));
              };
              b.set({l, p, i, j, k}, cyc(f, i, j, k), Expr::rational(0));
            }
    out.push_back(b.take());
  }
  // 15. P^l_{i1(p)|k} - P^l_{ik(p)/1} + P^(r)_(1)1(p) P^l_{ik(r)} - P^(r)_(1)k(p) P^l_{i1(r)}
  //     = R^l_{i1k}|_(p) + R^(r)_(1)1k S^l_{i(p)(r)} + C^r_{k(p)} R^l_{i1r} - T^r_{1k} P^l_{ir(p)}
  {
    Builder b("Bianchi-15", "bianchi", false, {"l", "i", "k", "p"}, {n, n, n, n});
    for (int l = 0; l < n; ++l)
      for (int i = 0; i < n; ++i)
        for (int k = 0; k < n; ++k)
          for (int p = 0; p < n; ++p) {
            std::vector<Expr> lhs{Pct_dx.at({l, i, 0, p, k}), -Pcs_dt.at({l, i, k, p, 0})};
            for (int r = 0; r < n; ++r) {
              lhs.push_back(tt.P_time.at({r, 0, p}) * ct.P_space.at({l, i, k, r}));
              lhs.push_back(-(tt.P_space.at({r, k, p}) * ct.P_time.at({l, i, 0, r})));
            }
            std::vector<Expr> rhs{Rct_dy.at({l, i, 0, k, p})};
            for (int r = 0; r < n; ++r) {
              rhs.push_back(tt.R_time.at({r, 0, k}) * ct.S_vert.at({l, i, p, r}));
              rhs.push_back(conn.C[r][k][p] * ct.R_time.at({l, i, 0, r}));
              rhs.push_back(-(tt.T_time.at({r, 0, k}) * ct.P_space.at({l, i, r, p})));
            }
            b.set({l, i, k, p}, Expr::sum(std::move(lhs)), Expr::sum(std::move(rhs)));
          }
    out.push_back(b.take());
  }
  // 16*. A_{j,k} { R^l_{ijr} C^r_{k(p)} + P^l_{ij(r)} P^(r)_(1)k(p) + P^l_{ik(p)|j} }
  //      = -S^l_{i(p)(r)} R^(r)_(1)jk - R^l_{ijk}|_(p)
  {
    Builder b("Bianchi-16", "bianchi", true, {"l", "i", "p", "j", "k"}, {n, n, n, n, n});
    for (int l = 0; l < n; ++l)
      for (int i = 0; i < n; ++i)
        for (int p = 0; p < n; ++p)
          for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k) {
              auto f = [&](int jj, int kk) {
                std::vector<Expr> t{Pcs_dx.at({l, i, kk, p, jj})};
                for (int r = 0; r < n; ++r) {
                  t.push_back(ct.R_space.at({l, i, jj, r}) * conn.C[r][kk][p]);
                  t.push_back(ct.P_space.at({l, i, jj, r}) * tt.P_space.at({r, kk, p}));
                }
                return Expr::sum(std::move(t));
              };
              std::vector<Expr> rhs{-Rcs_dy.at({l, i, j, k, p})};
              for (int r = 0; r < n; ++r)
                rhs.push_back(-(ct.S_vert.at({l, i, p, r}) * tt.R_space.at({r, j, k})));
              b.set({l, i, p, j, k}, alt(f, j, k), Expr::sum(std::move(rhs)));
            }
    out.push_back(b.take());
  }
  // 17. A_{j,k} { P^l_{p1(j)}|_(k) + P^(r)_(1)1(j) S^l_{p(k)(r)} } = -S^l_{p(j)(k)/1}
  {
    Builder b("Bianchi-17", "bianchi", false, {"l", "p", "j", "k"}, {n, n, n, n});
    for (int l = 0; l < n; ++l)
      for (int p = 0; p < n; ++p)
        for (int j = 0; j < n; ++j)
          for (int k = 0; k < n; ++k) {
            auto f = [&](int jj, int kk) {
              std::vector<Expr> t{Pct_dy.at({l, p, 0, jj, kk})};
              for (int r = 0; r < n; ++r)
                t.push_back(tt.P_time.at({r, 0, jj}) * ct.S_vert.at({l, p, kk, r}));
              return Expr::sum(std::move(t));
            };
            b.set({l, p, j, k}, alt(f, j, k), -Sc_dt.at({l, p, j, k, 0}));
          }
    out.push_back(b.take());
  }
  // 18*. A_{j,k} { P^l_{pr(j)} C^r_{i(k)} - S^l_{p(j)(r)} P^(r)_(1)i(k) - P^l_{pi(k)}|_(j) }
  //      = -S^l_{p(j)(k)|i}
  {
    Builder b("Bianchi-18", "bianchi", true, {"l", "p", "i", "j", "k"}, {n, n, n, n, n});
    for (int l = 0; l < n; ++l)
      for (int p = 0; p < n; ++p)
        for (int i = 0; i < n; ++i)
          for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k) {
              auto f = [&](int jj, int kk) {
                std::vector<Expr> t{-Pcs_dy.at({l, p, i, kk, jj})};
                for (int r = 0; r < n; ++r) {
                  t.push_back(ct.P_space.at({l, p, r, jj}) * conn.C[r][i][kk]);
                  t.push_back(-(ct.S_vert.at({l, p, jj, r}) * tt.P_space.at({r, i, kk})));
                }
                return Expr::sum(std::move(t));
              };
              b.set({l, p, i, j, k}, alt(f, j, k), -Sc_dx.at({l, p, j, k, i}));
            }
    out.push_back(b.take());
  }
  // 19*. sum_{i,j,k} S^l_{p(i)(j)}|_(k) = 0
  {
    Builder b("Bianchi-19", "bianchi", true, {"l", "p", "i", "j", "k"}, {n, n, n, n, n});
    for (int l = 0; l < n; ++l)
      for (int p = 0; p < n; ++p)
        for (int i = 0; i < n; ++i)
          for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k) {
              auto f = [&](int ii, int jj, int kk) { return Sc_dy.at({l, p, ii, jj, kk}); };
              b.set({l, p, i, j, k}, cyc(f, i, j, k), Expr::rational(0));
            }
    out.push_back(b.take());
  }

  return out;
}

// ---------------------------------------------------------------------------
// the two frame-indexed general Bianchi identities (arbiter oracle)
// ---------------------------------------------------------------------------

std::vector<ResidualTensor> general_bianchi_residuals(const GammaConnection& conn) {
  const int n = conn.n;
  const int m = frame_count(n);
  FrameTensor tf = torsion_frame(conn);
  FrameTensor rf = curvature_frame(conn);
  FrameTensor tf_cd = frame_cov_deriv(tf, conn, {true, false, false});
  FrameTensor rf_cd = frame_cov_deriv(rf, conn, {true, false, false, false});

  std::vector<std::array<int, 3>> triples;
  for (int a = 0; a < m; ++a)
    for (int b = a + 1; b < m; ++b)
      for (int c = b + 1; c < m; ++c) triples.push_back({a, b, c});
  const int nt = static_cast<int>(triples.size());

  std::vector<ResidualTensor> out;
  {
    Builder bld("GenBianchi-1", "general", false, {"F", "(A<B<C)"}, {m, nt});
    for (int f = 0; f < m; ++f) {
      for (int ti = 0; ti < nt; ++ti) {
        auto [A, B, C] = triples[ti];
        auto term = [&](int a, int b, int c) {
          std::vector<Expr> t{rf.at({f, a, b, c}), -tf_cd.at({f, a, b, c})};
          for (int g = 0; g < m; ++g) {
            const Expr& tg = tf.at({g, a, b});
            if (tg.is_zero()) continue;
            t.push_back(-(tg * tf.at({f, c, g})));
          }
          return Expr::sum(std::move(t));
        };
        Expr lhs = Expr::sum({term(A, B, C), term(B, C, A), term(C, A, B)});
        bld.set({f, ti}, lhs, Expr::rational(0));
      }
    }
    out.push_back(bld.take());
  }
  {
    Builder bld("GenBianchi-2", "general", false, {"F", "D", "(A<B<C)"}, {m, m, nt});
    for (int f = 0; f < m; ++f) {
      for (int d = 0; d < m; ++d) {
        for (int ti = 0; ti < nt; ++ti) {
          auto [A, B, C] = triples[ti];
          auto term = [&](int a, int b, int c) {
            std::vector<Expr> t{rf_cd.at({f, d, a, b, c})};
            for (int g = 0; g < m; ++g) {
              const Expr& tg = tf.at({g, a, b});
              if (tg.is_zero()) continue;
              t.push_back(tg * rf.at({f, d, c, g}));
            }
            return Expr::sum(std::move(t));
          };
          Expr lhs = Expr::sum({term(A, B, C), term(B, C, A), term(C, A, B)});
          bld.set({f, d, ti}, lhs, Expr::rational(0));
        }
      }
    }
    out.push_back(bld.take());
  }
  return out;
}

}  // namespace jetcartan
