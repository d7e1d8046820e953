#include <doctest.h>

#include <cmath>

#include "jetcartan/nonlinear.hpp"
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

std::vector<Point> sphere_points(int count) {
  SamplingPlan plan;
  plan.seed = 77;
  plan.count = count;
  plan.domain = Box::cube(2, 0.5, 1.5, -1.0, 1.0);
  plan.domain.x[0] = {0.35, 2.79};
  PointSampler s(plan);
  std::vector<Point> pts;
  for (int i = 0; i < count; ++i) pts.push_back(s.next());
  return pts;
}

}  // namespace

TEST_CASE("temporal christoffel closed forms") {
  CHECK(temporal_christoffel(TemporalMetric(Expr::rational(1))).is_zero());
  TemporalMetric exp2t(parse_expr("exp(2*t)", 1));
  CHECK(temporal_christoffel(exp2t).is_one());
  TemporalMetric tsq(parse_expr("t^2", 1));
  Expr kappa = temporal_christoffel(tsq);
  CHECK(eval(kappa, Point{2.0, {0}, {0}}) == doctest::Approx(0.5).epsilon(1e-14));
  // kappa = (1/2) d(log h)/dt at sample points
  for (double t : {0.4, 0.9, 1.7}) {
    Point p{t, {0}, {0}};
    Expr dlog = diff(Expr::call(FuncKind::Log, tsq.h11), Coordinate::time());
    CHECK(eval(kappa, p) == doctest::Approx(0.5 * eval(dlog, p)).epsilon(1e-12));
  }
  // first kind: kappa_111 = kappa * h11
  CHECK(is_symbolically_zero(temporal_christoffel_first_kind(tsq) -
                             simplify(kappa * tsq.h11)));
}

TEST_CASE("temporal metric rejects x/y dependence") {
  CHECK_THROWS_AS(TemporalMetric(parse_expr("x1", 1)), std::invalid_argument);
}

TEST_CASE("spatial christoffel on the unit sphere") {
  DTensor g = spatial_christoffel(unit_sphere());
  CHECK(is_symbolically_zero(g.at({0, 1, 1}) - parse_expr("-sin(x1)*cos(x1)", 2)));
  CHECK(is_symbolically_zero(g.at({1, 0, 1}) - parse_expr("cos(x1)/sin(x1)", 2)));
  for (std::size_t i = 0; i < g.size(); ++i) CHECK(simplify(g[i]) == g[i]);
  // identity metric: all zero
  DTensor gf = spatial_christoffel(flat_metric(3));
  for (std::size_t i = 0; i < gf.size(); ++i) CHECK(gf[i].is_zero());
}

TEST_CASE("christoffel symmetric in the lower pair at random points") {
  SpatialMetric phi(2, {{parse_expr("2 + x2^2", 2), parse_expr("x1*x2/4", 2)},
                        {parse_expr("x1*x2/4", 2), parse_expr("3 + x1^2", 2)}});
  DTensor g = spatial_christoffel(phi);
  Rng rng(11);
  for (int c = 0; c < 100; ++c) {
    Point p = random_point(rng, 2);
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j)
        for (int k = 0; k < 2; ++k)
          CHECK(eval(g.at({i, j, k}), p) == doctest::Approx(eval(g.at({i, k, j}), p)));
  }
}

TEST_CASE("inverse metric: identity, diagonal, and numeric product oracle") {
  ExprMatrix inv_flat = inverse_spatial_metric(flat_metric(2));
  CHECK(inv_flat[0][0].is_one());
  CHECK(inv_flat[0][1].is_zero());

  ExprMatrix inv_sphere = inverse_spatial_metric(unit_sphere());
  CHECK(is_symbolically_zero(inv_sphere[1][1] - parse_expr("1/sin(x1)^2", 2)));

  SpatialMetric phi(3, {{parse_expr("4", 3), parse_expr("1", 3), parse_expr("0", 3)},
                        {parse_expr("1", 3), parse_expr("3", 3), parse_expr("1/2", 3)},
                        {parse_expr("0", 3), parse_expr("1/2", 3), parse_expr("2", 3)}});
  ExprMatrix inv = inverse_spatial_metric(phi);
  Rng r3(3);
  Point p = random_point(r3, 3);  // constant matrix: any point
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      double acc = 0;
      for (int m = 0; m < 3; ++m) acc += eval(inv[i][m], p) * eval(phi.phi[m][j], p);
      CHECK(std::fabs(acc - (i == j ? 1.0 : 0.0)) < 1e-10);
    }
  CHECK_THROWS_AS(inverse_spatial_metric(flat_metric(5)), std::invalid_argument);
}

TEST_CASE("canonical nonlinear connection") {
  TemporalMetric h1(Expr::rational(1));
  NonlinearConnection flat = canonical_nlc(h1, flat_metric(2));
  for (const auto& m : flat.M) CHECK(m.is_zero());
  for (const auto& row : flat.N)
    for (const auto& e : row) CHECK(e.is_zero());

  TemporalMetric he(parse_expr("exp(2*t)", 2));
  NonlinearConnection exp_canon = canonical_nlc(he, flat_metric(2));
  CHECK(is_symbolically_zero(exp_canon.M[0] - parse_expr("-y1", 2)));
  CHECK(is_symbolically_zero(exp_canon.M[1] - parse_expr("-y2", 2)));

  NonlinearConnection sph = canonical_nlc(h1, unit_sphere());
  CHECK(is_symbolically_zero(sph.N[0][1] - parse_expr("-sin(x1)*cos(x1)*y2", 2)));
}

TEST_CASE("nonlinear connection from a semispray") {
  std::vector<Expr> zero2(2, Expr::rational(0));
  NonlinearConnection z = nlc_from_semispray(zero2, zero2);
  CHECK(z.M[0].is_zero());
  CHECK(z.N[1][1].is_zero());

  // H = -(kappa/2) y and G = (1/2) gamma y y reproduce the canonical connection
  TemporalMetric h(parse_expr("t^2", 2));
  SpatialMetric phi = unit_sphere();
  Expr kappa = temporal_christoffel(h);
  DTensor gamma = spatial_christoffel(phi);
  std::vector<Expr> H(2, Expr::rational(0)), G(2, Expr::rational(0));
  for (int j = 0; j < 2; ++j) {
    H[j] = Expr::rational(-1, 2) * kappa * Expr::var(Coordinate::fiber(j + 1));
    std::vector<Expr> terms;
    for (int k = 0; k < 2; ++k)
      for (int m = 0; m < 2; ++m)
        terms.push_back(Expr::rational(1, 2) * gamma.at({j, k, m}) *
                        Expr::var(Coordinate::fiber(k + 1)) * Expr::var(Coordinate::fiber(m + 1)));
    G[j] = Expr::sum(std::move(terms));
  }
  NonlinearConnection from_spray = nlc_from_semispray(H, G);
  NonlinearConnection canon = canonical_nlc(h, phi);
  for (int j = 0; j < 2; ++j) {
    CHECK(is_symbolically_zero(from_spray.M[j] - canon.M[j]));
    for (int i = 0; i < 2; ++i) CHECK(is_symbolically_zero(from_spray.N[j][i] - canon.N[j][i]));
  }
}

TEST_CASE("adapted frame derivations and coframe duality") {
  // zero connection: delta/delta t is d/dt
  NonlinearConnection zero = NonlinearConnection::zero(2);
  AdaptedFrame zf(zero);
  Expr f = parse_expr("t*y1 + x2", 2);
  CHECK(zf.delta_t(f) == simplify(diff(f, Coordinate::time())));

  // sphere: delta/delta x2 (y1) = -N^1_2 = sin(x1) cos(x1) y2
  TemporalMetric h1(Expr::rational(1));
  NonlinearConnection sph = canonical_nlc(h1, unit_sphere());
  AdaptedFrame frame(sph);
  CHECK(is_symbolically_zero(frame.delta_x(2, Expr::var(Coordinate::fiber(1))) -
                             parse_expr("sin(x1)*cos(x1)*y2", 2)));

  // all nine frame/coframe pairings give the identity pattern
  Rng rng(8);
  NonlinearConnection rnd = random_nlc(rng, 2);
  const int n = 2;
  auto frame_coord = [&](int a, int comp) -> Expr {
    // comp: 0 = dt, 1..n = dx, n+1..2n = dy coordinates of frame field a
    if (a == 0) {  // delta/delta t
      if (comp == 0) return Expr::rational(1);
      if (comp <= n) return Expr::rational(0);
      return simplify(-rnd.M[comp - n - 1]);
    }
    if (a <= n) {  // delta/delta x^a
      if (comp == a) return Expr::rational(1);
      if (comp <= n) return Expr::rational(0);
      return comp > n ? simplify(-rnd.N[comp - n - 1][a - 1]) : Expr::rational(0);
    }
    return comp == a ? Expr::rational(1) : Expr::rational(0);  // d/dy
  };
  auto coframe_coord = [&](int b, int comp) -> Expr {
    // b: 0 = dt, 1..n = dx^b, n+1..2n = delta y^b
    if (b == 0) return comp == 0 ? Expr::rational(1) : Expr::rational(0);
    if (b <= n) return comp == b ? Expr::rational(1) : Expr::rational(0);
    int i = b - n;
    if (comp == 0) return rnd.M[i - 1];
    if (comp <= n) return rnd.N[i - 1][comp - 1];
    return comp == b ? Expr::rational(1) : Expr::rational(0);
  };
  for (int b = 0; b <= 2 * n; ++b)
    for (int a = 0; a <= 2 * n; ++a) {
      std::vector<Expr> terms;
      for (int comp = 0; comp <= 2 * n; ++comp)
        terms.push_back(coframe_coord(b, comp) * frame_coord(a, comp));
      Expr pairing = simplify(Expr::sum(std::move(terms)));
      if (a == b)
        CHECK(pairing.is_one());
      else
        CHECK(pairing.is_zero());
    }
}

TEST_CASE("frame brackets close into the vertical distribution") {
  Rng rng(21);
  NonlinearConnection rnd = random_nlc(rng, 2);
  for (int a = 0; a < frame_count(2); ++a)
    for (int b = 0; b < frame_count(2); ++b) {
      VectorField br = frame_bracket(rnd, FrameIndex{a}, FrameIndex{b});
      CHECK(br.t_comp.is_zero());
      for (const Expr& e : br.x_comp) CHECK(e.is_zero());
    }
}

TEST_CASE("frame bracket closed forms") {
  // flat canonical connection: all brackets vanish
  TemporalMetric h1(Expr::rational(1));
  NonlinearConnection flat = canonical_nlc(h1, flat_metric(2));
  for (int a = 0; a < frame_count(2); ++a)
    for (int b = 0; b < frame_count(2); ++b) {
      VectorField br = frame_bracket(flat, FrameIndex{a}, FrameIndex{b});
      for (const Expr& e : br.y_comp) CHECK(e.is_zero());
    }

  // [delta_t, d/dy^j] = (dM^k/dy^j) d/dy^k
  Rng rng(22);
  NonlinearConnection rnd = random_nlc(rng, 2);
  for (int j = 1; j <= 2; ++j) {
    VectorField br = frame_bracket(rnd, FrameIndex::time(), FrameIndex::fiber(j, 2));
    for (int k = 0; k < 2; ++k)
      CHECK(is_symbolically_zero(br.y_comp[k] -
                                 diff(rnd.M[k], Coordinate::fiber(j))));
  }
}

TEST_CASE("spatial riemann: flat, sphere Gauss curvature, antisymmetry") {
  DTensor rf = spatial_riemann(flat_metric(3));
  for (std::size_t i = 0; i < rf.size(); ++i) CHECK(rf[i].is_zero());

  DTensor r = spatial_riemann(unit_sphere());
  // Ricci contraction (upper against last slot) reproduces phi: Gauss curvature 1
  SpatialMetric sphere = unit_sphere();
  for (const Point& p : sphere_points(25)) {
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) {
        double ric = 0;
        for (int k = 0; k < 2; ++k) ric += eval(r.at({k, i, j, k}), p);
        CHECK(std::fabs(ric - eval(sphere.phi[i][j], p)) < 1e-9);
      }
  }

  SpatialMetric phi(2, {{parse_expr("2 + x2^2", 2), parse_expr("x1*x2/4", 2)},
                        {parse_expr("x1*x2/4", 2), parse_expr("3 + x1^2", 2)}});
  DTensor rr = spatial_riemann(phi);
  Rng rng(14);
  for (int c = 0; c < 50; ++c) {
    Point p = random_point(rng, 2);
    for (int l = 0; l < 2; ++l)
      for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
          for (int k = 0; k < 2; ++k)
            CHECK(eval(rr.at({l, i, j, k}), p) ==
                  doctest::Approx(-eval(rr.at({l, i, k, j}), p)).epsilon(1e-10));
  }
}

TEST_CASE("nonlinear connection transformation") {
  // identity change leaves the connection alone
  Rng rng(17);
  NonlinearConnection rnd = random_nlc(rng, 2);
  ChartChange ident{Expr::var(Coordinate::time()),
                    {Expr::var(Coordinate::space(1)), Expr::var(Coordinate::space(2))},
                    Expr::var(Coordinate::time()),
                    {Expr::var(Coordinate::space(1)), Expr::var(Coordinate::space(2))}};
  NonlinearConnection same = nlc_transform(rnd, ident);
  for (int j = 0; j < 2; ++j) {
    CHECK(is_symbolically_zero(same.M[j] - rnd.M[j]));
    for (int i = 0; i < 2; ++i) CHECK(is_symbolically_zero(same.N[j][i] - rnd.N[j][i]));
  }

  // t~ = 2t on the zero connection stays zero
  NonlinearConnection z = NonlinearConnection::zero(1);
  ChartChange scale{parse_expr("2*t", 1),
                    {Expr::var(Coordinate::space(1))},
                    parse_expr("t/2", 1),
                    {Expr::var(Coordinate::space(1))}};
  NonlinearConnection zt = nlc_transform(z, scale);
  CHECK(zt.M[0].is_zero());
  CHECK(zt.N[0][0].is_zero());

  // the canonical connection transforms into the canonical connection of the
  // pulled-back metrics
  TemporalMetric h(parse_expr("t^2", 2));
  SpatialMetric phi(2, {{parse_expr("1", 2), parse_expr("0", 2)},
                        {parse_expr("0", 2), parse_expr("1 + x1^2", 2)}});
  ChartChange mix{parse_expr("2*t", 2),
                  {parse_expr("x1 + x2", 2), parse_expr("x1 - x2", 2)},
                  parse_expr("t/2", 2),
                  {parse_expr("(x1 + x2)/2", 2), parse_expr("(x1 - x2)/2", 2)}};
  NonlinearConnection transformed = nlc_transform(canonical_nlc(h, phi), mix);

  // pull back the metrics by hand (the symbols now denote the new chart)
  std::vector<std::pair<Coordinate, Expr>> old_of_new{
      {Coordinate::time(), mix.t_old_of_new},
      {Coordinate::space(1), mix.x_old_of_new[0]},
      {Coordinate::space(2), mix.x_old_of_new[1]}};
  Expr dt_dnew = diff(mix.t_old_of_new, Coordinate::time());
  TemporalMetric h_new(simplify(substitute(h.h11, old_of_new) * dt_dnew * dt_dnew));
  ExprMatrix jac(2, std::vector<Expr>(2, Expr::rational(0)));
  for (int i = 0; i < 2; ++i)
    for (int l = 0; l < 2; ++l) jac[i][l] = diff(mix.x_old_of_new[i], Coordinate::space(l + 1));
  ExprMatrix phi_new(2, std::vector<Expr>(2, Expr::rational(0)));
  for (int k = 0; k < 2; ++k)
    for (int l = 0; l < 2; ++l) {
      std::vector<Expr> terms;
      for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
          terms.push_back(substitute(phi.phi[i][j], old_of_new) * jac[i][k] * jac[j][l]);
      phi_new[k][l] = simplify(Expr::sum(std::move(terms)));
    }
  NonlinearConnection expected = canonical_nlc(h_new, SpatialMetric(2, phi_new));

  Rng prng(55);
  for (int c = 0; c < 30; ++c) {
    Point p = random_point(prng, 2, 0.3, 1.1);
    for (int j = 0; j < 2; ++j) {
      CHECK(eval(transformed.M[j], p) == doctest::Approx(eval(expected.M[j], p)).epsilon(1e-9));
      for (int i = 0; i < 2; ++i)
        CHECK(eval(transformed.N[j][i], p) ==
              doctest::Approx(eval(expected.N[j][i], p)).epsilon(1e-9));
    }
  }

  // degenerate time change is rejected
  ChartChange bad{parse_expr("1", 1),
                  {Expr::var(Coordinate::space(1))},
                  parse_expr("t", 1),
                  {Expr::var(Coordinate::space(1))}};
  CHECK_THROWS_AS(nlc_transform(z, bad), std::invalid_argument);
}
