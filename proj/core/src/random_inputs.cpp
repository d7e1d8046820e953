#include "jetcartan/random_inputs.hpp"

namespace jetcartan {

namespace {

Expr rational_coeff(Rng& rng) {
  // nonzero multiples of 1/8 in [-2, 2]
  std::int64_t k = rng.uniform_int(-16, 16);
  if (k == 0) k = 1;
  return Expr::rational(k, 8);
}

Expr random_monomial(Rng& rng, int n, int max_degree) {
  int degree = static_cast<int>(rng.uniform_int(0, max_degree));
  std::vector<Expr> factors{rational_coeff(rng)};
  for (int d = 0; d < degree; ++d) {
    int which = static_cast<int>(rng.uniform_int(0, 2 * n));
    Coordinate c = which == 0 ? Coordinate::time()
                   : which <= n ? Coordinate::space(which)
                                : Coordinate::fiber(which - n);
    factors.push_back(Expr::var(c));
  }
  return Expr::product(std::move(factors));
}

}  // namespace

Expr random_polynomial(Rng& rng, int n, int max_degree, int terms) {
  std::vector<Expr> t;
  int count = static_cast<int>(rng.uniform_int(1, terms));
  for (int i = 0; i < count; ++i) t.push_back(random_monomial(rng, n, max_degree));
  return simplify(Expr::sum(std::move(t)));
}

TemporalMetric random_temporal_metric(Rng& rng) {
  Expr a0 = rational_coeff(rng);
  Expr a1 = rational_coeff(rng);
  Expr tvar = Expr::var(Coordinate::time());
  Expr arg = a0 * tvar + a1 * tvar * tvar;
  return TemporalMetric(Expr::call(FuncKind::Exp, arg));
}

NonlinearConnection random_nlc(Rng& rng, int n) {
  std::vector<Expr> M(n, Expr::rational(0));
  ExprMatrix N(n, std::vector<Expr>(n, Expr::rational(0)));
  for (int j = 0; j < n; ++j) {
    M[j] = random_polynomial(rng, n);
    for (int i = 0; i < n; ++i) N[j][i] = random_polynomial(rng, n);
  }
  return NonlinearConnection(n, std::move(M), std::move(N));
}

HNormalData random_cartan_data(Rng& rng, int n) {
  TemporalMetric h = random_temporal_metric(rng);
  ExprMatrix G(n, std::vector<Expr>(n, Expr::rational(0)));
  ExprCube L(n, G), C(n, G);
  for (int k = 0; k < n; ++k) {
    for (int i = 0; i < n; ++i) {
      G[k][i] = random_polynomial(rng, n);
      for (int j = i; j < n; ++j) {
        L[k][i][j] = random_polynomial(rng, n);
        L[k][j][i] = L[k][i][j];
        C[k][i][j] = random_polynomial(rng, n);
        C[k][j][i] = C[k][i][j];
      }
    }
  }
  return HNormalData{h, std::move(G), std::move(L), std::move(C)};
}

GammaConnection random_cartan_connection(std::uint64_t seed, int n) {
  Rng rng(seed);
  NonlinearConnection nlc = random_nlc(rng, n);
  HNormalData data = random_cartan_data(rng, n);
  return make_h_normal_cartan(data, nlc);
}

GammaConnection random_general_connection(std::uint64_t seed, int n) {
  Rng rng(seed);
  NonlinearConnection nlc = random_nlc(rng, n);
  auto mat = [&] {
    ExprMatrix m(n, std::vector<Expr>(n, Expr::rational(0)));
    for (auto& row : m)
      for (auto& e : row) e = random_polynomial(rng, n);
    return m;
  };
  auto cube = [&] {
    ExprCube c(n, ExprMatrix(n, std::vector<Expr>(n, Expr::rational(0))));
    for (auto& m : c)
      for (auto& row : m)
        for (auto& e : row) e = random_polynomial(rng, n);
    return c;
  };
  auto vec = [&] {
    std::vector<Expr> v(n, Expr::rational(0));
    for (auto& e : v) e = random_polynomial(rng, n);
    return v;
  };
  return GammaConnection::general(std::move(nlc), random_polynomial(rng, n), mat(), mat(), vec(),
                                  cube(), cube(), vec(), cube(), cube());
}

VectorField random_dvector_field(Rng& rng, int n) {
  VectorField x = VectorField::zero(n);
  x.t_comp = random_polynomial(rng, n);
  for (int i = 0; i < n; ++i) {
    x.x_comp[i] = random_polynomial(rng, n);
    x.y_comp[i] = random_polynomial(rng, n);
  }
  return x;
}

}  // namespace jetcartan
