#include "jetcartan/covderiv.hpp"

#include <cmath>

namespace jetcartan {

namespace {

// correction coefficient lookup for one slot band under one direction band
struct FamilyRef {
  const GammaConnection& c;
  DerivKind dir;
  int p;  // 0-based direction index within the band (unused for Temporal)

  Expr time_coeff() const {
    switch (dir) {
      case DerivKind::Temporal: return c.Gbar;
      case DerivKind::Spatial: return c.Lbar[p];
      default: return c.Cbar[p];
    }
  }
  Expr space_coeff(int k, int i) const {
    switch (dir) {
      case DerivKind::Temporal: return c.G[k][i];
      case DerivKind::Spatial: return c.L[k][i][p];
      default: return c.C[k][i][p];
    }
  }
  Expr fiber_coeff(int k, int i) const {
    switch (dir) {
      case DerivKind::Temporal: return c.Gfib[k][i];
      case DerivKind::Spatial: return c.Lfib[k][i][p];
      default: return c.Cfib[k][i][p];
    }
  }
};

Expr frame_derivative(const Expr& f, const GammaConnection& conn, DerivKind dir, int p) {
  AdaptedFrame frame(conn.nlc);
  switch (dir) {
    case DerivKind::Temporal: return frame.delta_t(f);
    case DerivKind::Spatial: return frame.delta_x(p + 1, f);
    default: return diff(f, Coordinate::fiber(p + 1));
  }
}

SlotKind appended_slot(DerivKind dir) {
  switch (dir) {
    case DerivKind::Temporal: return SlotKind::TimeLower;
    case DerivKind::Spatial: return SlotKind::SpaceLower;
    default: return SlotKind::FiberLower;
  }
}

}  // namespace

DTensor cov_deriv(const DTensor& D, const GammaConnection& conn, DerivKind dir) {
  const int n = conn.n;
  std::vector<SlotKind> sig = D.signature();
  sig.push_back(appended_slot(dir));
  DTensor out(n, sig);

  const int band = dir == DerivKind::Temporal ? 1 : n;
  const std::size_t total = D.size();
  for (std::size_t flat = 0; flat < total; ++flat) {
    std::vector<int> idx = D.unflatten(flat);
    for (int p = 0; p < band; ++p) {
      FamilyRef fam{conn, dir, p};
      std::vector<Expr> terms{frame_derivative(D[flat], conn, dir, p)};
      for (int s = 0; s < D.rank(); ++s) {
        SlotKind slot = D.signature()[s];
        bool upper = slot_is_upper(slot);
        if (slot_is_time(slot)) {
          Expr t = D[flat] * fam.time_coeff();
          if (!t.is_zero()) terms.push_back(upper ? t : -t);
          continue;
        }
        const int a = idx[s];
        std::vector<int> idx2 = idx;
        for (int r = 0; r < n; ++r) {
          idx2[s] = r;
          const Expr& comp = D[D.flatten(idx2)];
          if (comp.is_zero()) continue;
          Expr c = slot_is_space(slot) ? (upper ? fam.space_coeff(a, r) : fam.space_coeff(r, a))
                                       : (upper ? fam.fiber_coeff(a, r) : fam.fiber_coeff(r, a));
          Expr t = comp * c;
          if (!t.is_zero()) terms.push_back(upper ? t : -t);
        }
      }
      std::vector<int> oidx = idx;
      oidx.push_back(p);
      out[out.flatten(oidx)] = simplify(Expr::sum(std::move(terms)));
    }
  }
  return out;
}

std::vector<Expr> h_normal_condition_residuals(const GammaConnection& conn,
                                               const TemporalMetric& h) {
  const int n = conn.n;
  std::vector<Expr> res;
  Expr kappa = temporal_christoffel(h);
  res.push_back(simplify(conn.Gbar - kappa));
  for (int j = 0; j < n; ++j) res.push_back(simplify(conn.Lbar[j]));
  for (int k = 0; k < n; ++k) res.push_back(simplify(conn.Cbar[k]));
  DTensor J = h_normalization_tensor(h, n);
  for (DerivKind dir : {DerivKind::Temporal, DerivKind::Spatial, DerivKind::Vertical}) {
    DTensor dJ = cov_deriv(J, conn, dir);
    for (std::size_t i = 0; i < dJ.size(); ++i) res.push_back(dJ[i]);
  }
  return res;
}

HNormalCheck check_h_normal(const GammaConnection& conn, const TemporalMetric& h,
                            const SamplingPlan& plan) {
  plan.validate();
  const std::size_t n = static_cast<std::size_t>(conn.n);
  std::vector<Expr> res = h_normal_condition_residuals(conn, h);
  PointSampler sampler(plan);
  HNormalCheck out;
  for (int c = 0; c < plan.count; ++c) {
    Point p = sampler.next();
    EvalScratch scratch;
    for (std::size_t i = 0; i < res.size(); ++i) {
      double v = std::fabs(scratch.eval(res[i], p));
      double& bucket = i == 0            ? out.gbar
                       : i <= n          ? out.lbar
                       : i <= 2 * n      ? out.cbar
                                         : out.nabla_j;
      if (v > bucket) bucket = v;
      if (v > out.max_abs) {
        out.max_abs = v;
        out.worst = p;
      }
    }
  }
  out.pass = out.max_abs <= plan.abs_tol;
  return out;
}

}  // namespace jetcartan
