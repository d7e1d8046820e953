#include <doctest.h>

#include <cmath>

#include "jetcartan/covderiv.hpp"
#include "jetcartan/parser.hpp"
#include "jetcartan/random_inputs.hpp"
#include "support/generators.hpp"

using namespace jetcartan;
using jetcartan::testing::random_point;

namespace {

SpatialMetric unit_sphere() {
  return SpatialMetric(2, {{parse_expr("1", 2), parse_expr("0", 2)},
                           {parse_expr("0", 2), parse_expr("sin(x1)^2", 2)}});
}

SpatialMetric flat_metric(int n) {
  ExprMatrix phi(n, std::vector<Expr>(n, Expr::rational(0)));
  for (int i = 0; i < n; ++i) phi[i][i] = Expr::rational(1);
  return SpatialMetric(n, phi);
}

SamplingPlan small_plan(int n, std::uint64_t seed = 4, int count = 20) {
  SamplingPlan p;
  p.seed = seed;
  p.count = count;
  p.domain = Box::cube(n, 0.25, 1.25, -1.0, 1.0);
  return p;
}

}  // namespace

TEST_CASE("make_h_normal_cartan fills the dependent families") {
  TemporalMetric h(parse_expr("exp(2*t)", 2));  // kappa = 1
  SpatialMetric phi = unit_sphere();
  GammaConnection bw = berwald(h, phi);
  Expr kappa = temporal_christoffel(h);

  CHECK(bw.h_normal);
  CHECK(bw.cartan);
  CHECK(simplify(bw.Gbar - kappa).is_zero());
  for (int k = 0; k < 2; ++k)
    for (int i = 0; i < 2; ++i) {
      Expr expected = k == i ? simplify(-kappa) : Expr::rational(0);
      CHECK(simplify(bw.Gfib[k][i] - expected).is_zero());
    }
  // Lfib and Cfib share the effective arrays
  DTensor gamma = spatial_christoffel(phi);
  for (int k = 0; k < 2; ++k)
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) {
        CHECK(bw.Lfib[k][i][j] == bw.L[k][i][j]);
        CHECK(is_symbolically_zero(bw.L[k][i][j] - gamma.at({k, i, j})));
        CHECK(bw.Cfib[k][i][j] == bw.C[k][i][j]);
      }
}

TEST_CASE("asymmetric data is rejected with the failing triple") {
  TemporalMetric h(Expr::rational(1));
  int n = 2;
  ExprMatrix G(n, std::vector<Expr>(n, Expr::rational(0)));
  ExprCube L(n, G), C(n, G);
  L[0][0][1] = Expr::var(Coordinate::fiber(1));  // L^1_{12} != L^1_{21}
  HNormalData data{h, G, L, C};
  try {
    make_h_normal_cartan(data, NonlinearConnection::zero(n));
    FAIL("expected SymmetryViolation");
  } catch (const SymmetryViolation& e) {
    CHECK(e.family == "L");
    CHECK(e.k == 0);
    CHECK(e.i == 0);
    CHECK(e.j == 1);
    CHECK(std::string(e.what()).find("L^1_(1,2)") != std::string::npos);
  }
}

TEST_CASE("berwald over the flat pair vanishes") {
  GammaConnection bw = berwald(TemporalMetric(Expr::rational(1)), flat_metric(2));
  CHECK(bw.Gbar.is_zero());
  for (int k = 0; k < 2; ++k)
    for (int i = 0; i < 2; ++i) {
      CHECK(bw.G[k][i].is_zero());
      CHECK(bw.Gfib[k][i].is_zero());
      for (int j = 0; j < 2; ++j) {
        CHECK(bw.L[k][i][j].is_zero());
        CHECK(bw.C[k][i][j].is_zero());
      }
    }
}

TEST_CASE("check_h_normal accepts berwald and flags violations") {
  TemporalMetric h(parse_expr("t^2", 2));
  GammaConnection bw = berwald(h, unit_sphere());
  SamplingPlan plan = small_plan(2);
  plan.domain.x[0] = {0.35, 2.79};
  plan.domain.t = {0.5, 1.5};

  HNormalCheck ok = check_h_normal(bw, h, plan);
  CHECK(ok.pass);
  CHECK(ok.max_abs == 0.0);  // exact by construction

  GammaConnection broken = bw;
  broken.Lbar[1] = Expr::rational(1);
  HNormalCheck bad = check_h_normal(broken, h, plan);
  CHECK(!bad.pass);
  CHECK(bad.lbar == doctest::Approx(1.0));  // the violated condition reads exactly 1
  CHECK(bad.max_abs >= 1.0);                // and it leaks into nabla J as well

  GammaConnection rnd = random_cartan_connection(123, 2);
  HNormalCheck r = check_h_normal(rnd, *rnd.h, small_plan(2, 5));
  CHECK(r.max_abs < 1e-10);
}

TEST_CASE("cov_deriv reduces to frame derivatives when all families vanish") {
  GammaConnection flat = berwald(TemporalMetric(Expr::rational(1)), flat_metric(2));
  DTensor D(2, {SlotKind::SpaceUpper, SlotKind::FiberLower});
  Rng rng(6);
  for (std::size_t i = 0; i < D.size(); ++i) D[i] = random_polynomial(rng, 2);

  DTensor dt = cov_deriv(D, flat, DerivKind::Temporal);
  DTensor dx = cov_deriv(D, flat, DerivKind::Spatial);
  DTensor dy = cov_deriv(D, flat, DerivKind::Vertical);
  for (std::size_t i = 0; i < D.size(); ++i) {
    auto idx = D.unflatten(i);
    auto with = [&](int p) {
      std::vector<int> v = idx;
      v.push_back(p);
      return v;
    };
    CHECK(dt[dt.flatten(with(0))] == simplify(diff(D[i], Coordinate::time())));
    for (int p = 0; p < 2; ++p) {
      CHECK(dx[dx.flatten(with(p))] == simplify(diff(D[i], Coordinate::space(p + 1))));
      CHECK(dy[dy.flatten(with(p))] == simplify(diff(D[i], Coordinate::fiber(p + 1))));
    }
  }
}

TEST_CASE("cov_deriv appends the direction slot last") {
  GammaConnection conn = random_cartan_connection(9, 2);
  DTensor D(2, {SlotKind::FiberUpper, SlotKind::TimeLower, SlotKind::SpaceLower});
  auto sig_t = cov_deriv(D, conn, DerivKind::Temporal).signature();
  CHECK(sig_t.back() == SlotKind::TimeLower);
  auto sig_x = cov_deriv(D, conn, DerivKind::Spatial).signature();
  CHECK(sig_x.back() == SlotKind::SpaceLower);
  auto sig_y = cov_deriv(D, conn, DerivKind::Vertical).signature();
  CHECK(sig_y.back() == SlotKind::FiberLower);
  CHECK(sig_y.size() == D.signature().size() + 1);
}

TEST_CASE("cov_deriv is linear") {
  GammaConnection conn = random_cartan_connection(31, 2);
  Rng rng(41);
  DTensor A(2, {SlotKind::SpaceUpper, SlotKind::FiberLower});
  DTensor B(2, {SlotKind::SpaceUpper, SlotKind::FiberLower});
  for (std::size_t i = 0; i < A.size(); ++i) {
    A[i] = random_polynomial(rng, 2);
    B[i] = random_polynomial(rng, 2);
  }
  Expr a = Expr::rational(3, 2), b = Expr::rational(-2, 5);
  for (DerivKind dir : {DerivKind::Temporal, DerivKind::Spatial, DerivKind::Vertical}) {
    DTensor lhs = cov_deriv(A.scaled(a) + B.scaled(b), conn, dir);
    DTensor rhs = cov_deriv(A, conn, dir).scaled(a) + cov_deriv(B, conn, dir).scaled(b);
    for (std::size_t i = 0; i < lhs.size(); ++i)
      CHECK(is_symbolically_zero(lhs[i] - rhs[i]));
  }
}

TEST_CASE("cov_deriv satisfies the Leibniz rule on tensor products") {
  GammaConnection conn = random_cartan_connection(77, 2);
  Rng rng(78);
  DTensor A(2, {SlotKind::SpaceUpper});
  DTensor B(2, {SlotKind::FiberLower});
  for (std::size_t i = 0; i < A.size(); ++i) A[i] = random_polynomial(rng, 2);
  for (std::size_t i = 0; i < B.size(); ++i) B[i] = random_polynomial(rng, 2);
  DTensor AB = A.tensor_product(B);

  for (DerivKind dir : {DerivKind::Temporal, DerivKind::Spatial, DerivKind::Vertical}) {
    DTensor lhs = cov_deriv(AB, conn, dir);
    DTensor dA = cov_deriv(A, conn, dir);
    DTensor dB = cov_deriv(B, conn, dir);
    const int band = dir == DerivKind::Temporal ? 1 : 2;
    Rng prng(79);
    for (int c = 0; c < 15; ++c) {
      Point pt = random_point(prng, 2, -0.8, 0.8);
      EvalScratch scratch;
      for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
          for (int p = 0; p < band; ++p) {
            double want = scratch.eval(dA.at({i, p}), pt) * scratch.eval(B.at({j}), pt) +
                          scratch.eval(A.at({i}), pt) * scratch.eval(dB.at({j, p}), pt);
            double got = scratch.eval(lhs.at({i, j, p}), pt);
            CHECK(std::fabs(got - want) < 1e-9);
          }
    }
  }
}

TEST_CASE("the h-normalization tensor is parallel for h-normal connections") {
  for (std::uint64_t seed : {1ULL, 2ULL, 3ULL}) {
    GammaConnection conn = random_cartan_connection(seed, 2);
    DTensor J = h_normalization_tensor(*conn.h, 2);
    for (DerivKind dir : {DerivKind::Temporal, DerivKind::Spatial, DerivKind::Vertical}) {
      DTensor dJ = cov_deriv(J, conn, dir);
      for (std::size_t i = 0; i < dJ.size(); ++i) CHECK(is_symbolically_zero(dJ[i]));
    }
  }
}
