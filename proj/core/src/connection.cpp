#include "jetcartan/connection.hpp"

#include <cmath>

#include "jetcartan/sampling.hpp"

namespace jetcartan {

namespace {

ExprMatrix zero_matrix(int n) { return ExprMatrix(n, std::vector<Expr>(n, Expr::rational(0))); }
ExprCube zero_cube(int n) { return ExprCube(n, zero_matrix(n)); }

void check_shape(const GammaConnection& c) {
  const auto n = static_cast<std::size_t>(c.n);
  auto bad = [&](bool cond) {
    if (cond) throw std::invalid_argument("GammaConnection: shape mismatch");
  };
  bad(c.G.size() != n || c.Gfib.size() != n || c.Lbar.size() != n || c.L.size() != n ||
      c.Lfib.size() != n || c.Cbar.size() != n || c.C.size() != n || c.Cfib.size() != n);
  for (std::size_t k = 0; k < n; ++k) {
    bad(c.G[k].size() != n || c.Gfib[k].size() != n || c.L[k].size() != n ||
        c.Lfib[k].size() != n || c.C[k].size() != n || c.Cfib[k].size() != n);
    for (std::size_t i = 0; i < n; ++i)
      bad(c.L[k][i].size() != n || c.Lfib[k][i].size() != n || c.C[k][i].size() != n ||
          c.Cfib[k][i].size() != n);
  }
}

bool numerically_zero(const Expr& e, int n) {
  for (const Point& p : probe_points(n, 20)) {
    try {
      if (std::fabs(eval(e, p)) > 1e-10) return false;
    } catch (const EvalDomainError&) {
      return false;
    }
  }
  return true;
}

void require_symmetric(const ExprCube& f, const char* family, int n) {
  for (int k = 0; k < n; ++k)
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j) {
        Expr d = f[k][i][j] - f[k][j][i];
        if (is_symbolically_zero(d)) continue;
        if (!numerically_zero(d, n)) throw SymmetryViolation(family, k, i, j);
      }
}

}  // namespace

GammaConnection GammaConnection::general(NonlinearConnection nlc, Expr Gbar, ExprMatrix G,
                                         ExprMatrix Gfib, std::vector<Expr> Lbar, ExprCube L,
                                         ExprCube Lfib, std::vector<Expr> Cbar, ExprCube C,
                                         ExprCube Cfib) {
  GammaConnection c;
  c.n = nlc.n;
  c.nlc = std::move(nlc);
  c.Gbar = Gbar;
  c.G = std::move(G);
  c.Gfib = std::move(Gfib);
  c.Lbar = std::move(Lbar);
  c.L = std::move(L);
  c.Lfib = std::move(Lfib);
  c.Cbar = std::move(Cbar);
  c.C = std::move(C);
  c.Cfib = std::move(Cfib);
  check_shape(c);
  return c.simplified();
}

GammaConnection GammaConnection::zero(NonlinearConnection nlc) {
  const int n = nlc.n;
  return general(std::move(nlc), Expr::rational(0), zero_matrix(n), zero_matrix(n),
                 std::vector<Expr>(n, Expr::rational(0)), zero_cube(n), zero_cube(n),
                 std::vector<Expr>(n, Expr::rational(0)), zero_cube(n), zero_cube(n));
}

GammaConnection GammaConnection::simplified() const {
  GammaConnection c = *this;
  c.Gbar = simplify(c.Gbar);
  auto simp_m = [](ExprMatrix& m) {
    for (auto& row : m)
      for (auto& e : row) e = simplify(e);
  };
  auto simp_c = [&](ExprCube& cc) {
    for (auto& m : cc) simp_m(m);
  };
  simp_m(c.G);
  simp_m(c.Gfib);
  for (auto& e : c.Lbar) e = simplify(e);
  simp_c(c.L);
  simp_c(c.Lfib);
  for (auto& e : c.Cbar) e = simplify(e);
  simp_c(c.C);
  simp_c(c.Cfib);
  return c;
}

GammaConnection make_h_normal_cartan(const HNormalData& data, const NonlinearConnection& nlc) {
  const int n = nlc.n;
  if (data.G.size() != static_cast<std::size_t>(n) ||
      data.L.size() != static_cast<std::size_t>(n) || data.C.size() != static_cast<std::size_t>(n))
    throw std::invalid_argument("make_h_normal_cartan: shape mismatch");

  require_symmetric(data.L, "L", n);
  require_symmetric(data.C, "C", n);

  Expr kappa = temporal_christoffel(data.h);

  GammaConnection c;
  c.n = n;
  c.nlc = nlc;
  c.Gbar = kappa;
  c.G = data.G;
  c.Gfib = data.G;
  for (int k = 0; k < n; ++k) c.Gfib[k][k] = simplify(data.G[k][k] - kappa);
  c.Lbar.assign(n, Expr::rational(0));
  c.L = data.L;
  c.Lfib = data.L;
  c.Cbar.assign(n, Expr::rational(0));
  c.C = data.C;
  c.Cfib = data.C;
  c.h_normal = true;
  c.cartan = true;
  c.h = data.h;
  check_shape(c);
  return c.simplified();
}

GammaConnection berwald(const TemporalMetric& h, const SpatialMetric& phi) {
  const int n = phi.n;
  DTensor gamma = spatial_christoffel(phi);
  ExprCube L = zero_cube(n);
  for (int k = 0; k < n; ++k)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) L[k][i][j] = gamma.at({k, i, j});
  HNormalData data{h, zero_matrix(n), std::move(L), zero_cube(n)};
  return make_h_normal_cartan(data, canonical_nlc(h, phi));
}

DTensor h_normalization_tensor(const TemporalMetric& h, int n) {
  DTensor J(n, {SlotKind::FiberUpper, SlotKind::TimeLower, SlotKind::SpaceLower});
  for (int i = 0; i < n; ++i) J.at({i, 0, i}) = h.h11;
  return J;
}

}  // namespace jetcartan
