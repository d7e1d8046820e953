#pragma once

// Test-only helpers: the finite-difference derivative oracle and generators
// for random expressions/points. Kept independent of the symbolic diff path
// they are used to check.

#include <cmath>
#include <optional>

#include "jetcartan/expr.hpp"
#include "jetcartan/sampling.hpp"

namespace jetcartan::testing {

inline Point shifted(const Point& p, Coordinate c, double h) {
  Point q = p;
  switch (c.kind) {
    case CoordKind::Time: q.t += h; break;
    case CoordKind::Space: q.x[c.index - 1] += h; break;
    case CoordKind::Fiber: q.y[c.index - 1] += h; break;
  }
  return q;
}

/// Central difference with one step of Richardson extrapolation
/// (step h and 2h): (4 D(h) - D(2h)) / 3.
inline std::optional<double> fd_derivative(const Expr& e, const Point& p, Coordinate c,
                                           double h = 1e-6) {
  try {
    auto central = [&](double step) {
      return (eval(e, shifted(p, c, step)) - eval(e, shifted(p, c, -step))) / (2.0 * step);
    };
    double d1 = central(h);
    double d2 = central(2.0 * h);
    return (4.0 * d1 - d2) / 3.0;
  } catch (const EvalDomainError&) {
    return std::nullopt;
  }
}

/// Random expressions that stay evaluable on moderate boxes: no bare log/inv,
/// exp arguments damped, sqrt applied to 1 + (.)^2.
inline Expr random_safe_expr(Rng& rng, int n, int depth = 4) {
  if (depth == 0 || rng.uniform_int(0, 5) == 0) {
    switch (rng.uniform_int(0, 2)) {
      case 0: return Expr::rational(rng.uniform_int(-8, 8), 4);
      case 1: {
        int which = static_cast<int>(rng.uniform_int(0, 2 * n));
        if (which == 0) return Expr::var(Coordinate::time());
        if (which <= n) return Expr::var(Coordinate::space(which));
        return Expr::var(Coordinate::fiber(which - n));
      }
      default: return Expr::var(Coordinate::time());
    }
  }
  Expr a = random_safe_expr(rng, n, depth - 1);
  Expr b = random_safe_expr(rng, n, depth - 1);
  switch (rng.uniform_int(0, 7)) {
    case 0: return Expr::sum({a, b});
    case 1: return a - b;
    case 2: return Expr::product({a, b});
    case 3: return Expr::call(FuncKind::Sin, a);
    case 4: return Expr::call(FuncKind::Cos, a);
    case 5: return Expr::call(FuncKind::Exp, Expr::rational(1, 4) * a);
    case 6: return Expr::call(FuncKind::Sqrt, Expr::rational(1) + a * a);
    default: return Expr::power(a, Rational(rng.uniform_int(2, 3)));
  }
}

inline Point random_point(Rng& rng, int n, double lo = -1.0, double hi = 1.0) {
  Point p;
  p.t = rng.uniform(lo, hi);
  for (int i = 0; i < n; ++i) p.x.push_back(rng.uniform(lo, hi));
  for (int i = 0; i < n; ++i) p.y.push_back(rng.uniform(lo, hi));
  return p;
}

/// Scale-relative deviation |a-b| / (1 + |a| + |b|).
inline double rel_dev(double a, double b) {
  return std::fabs(a - b) / (1.0 + std::fabs(a) + std::fabs(b));
}

}  // namespace jetcartan::testing
