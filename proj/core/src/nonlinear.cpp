#include "jetcartan/nonlinear.hpp"

#include <stdexcept>

namespace jetcartan {

NonlinearConnection::NonlinearConnection(int n_, std::vector<Expr> M_, ExprMatrix N_)
    : n(n_), M(std::move(M_)), N(std::move(N_)) {
  if (M.size() != static_cast<std::size_t>(n) || N.size() != static_cast<std::size_t>(n))
    throw std::invalid_argument("NonlinearConnection: shape mismatch");
  for (auto& row : N)
    if (row.size() != static_cast<std::size_t>(n))
      throw std::invalid_argument("NonlinearConnection: shape mismatch");
  for (auto& e : M) e = simplify(e);
  for (auto& row : N)
    for (auto& e : row) e = simplify(e);
}

NonlinearConnection NonlinearConnection::zero(int n) {
  return NonlinearConnection(n, std::vector<Expr>(n, Expr::rational(0)),
                             ExprMatrix(n, std::vector<Expr>(n, Expr::rational(0))));
}

NonlinearConnection canonical_nlc(const TemporalMetric& h, const SpatialMetric& phi) {
  const int n = phi.n;
  Expr kappa = temporal_christoffel(h);
  DTensor gamma = spatial_christoffel(phi);

  std::vector<Expr> M(n, Expr::rational(0));
  ExprMatrix N(n, std::vector<Expr>(n, Expr::rational(0)));
  for (int j = 0; j < n; ++j) {
    M[j] = -(kappa * Expr::var(Coordinate::fiber(j + 1)));
    for (int i = 0; i < n; ++i) {
      std::vector<Expr> terms;
      for (int m = 0; m < n; ++m)
        terms.push_back(gamma.at({j, i, m}) * Expr::var(Coordinate::fiber(m + 1)));
      N[j][i] = Expr::sum(std::move(terms));
    }
  }
  return NonlinearConnection(n, std::move(M), std::move(N));
}

NonlinearConnection nlc_from_semispray(const std::vector<Expr>& H, const std::vector<Expr>& G) {
  const int n = static_cast<int>(H.size());
  if (G.size() != H.size()) throw std::invalid_argument("nlc_from_semispray: size mismatch");
  std::vector<Expr> M(n, Expr::rational(0));
  ExprMatrix N(n, std::vector<Expr>(n, Expr::rational(0)));
  for (int j = 0; j < n; ++j) {
    M[j] = Expr::rational(2) * H[j];
    for (int k = 0; k < n; ++k) N[j][k] = diff(G[j], Coordinate::fiber(k + 1));
  }
  return NonlinearConnection(n, std::move(M), std::move(N));
}

Expr AdaptedFrame::delta_t(const Expr& f) const {
  std::vector<Expr> terms{diff(f, Coordinate::time())};
  for (int j = 0; j < gamma_.n; ++j)
    terms.push_back(-(gamma_.M[j] * diff(f, Coordinate::fiber(j + 1))));
  return simplify(Expr::sum(std::move(terms)));
}

Expr AdaptedFrame::delta_x(int i, const Expr& f) const {
  std::vector<Expr> terms{diff(f, Coordinate::space(i))};
  for (int j = 0; j < gamma_.n; ++j)
    terms.push_back(-(gamma_.N[j][i - 1] * diff(f, Coordinate::fiber(j + 1))));
  return simplify(Expr::sum(std::move(terms)));
}

Expr AdaptedFrame::partial_y(int i, const Expr& f) const {
  return simplify(diff(f, Coordinate::fiber(i)));
}

VectorField VectorField::zero(int n) {
  VectorField v;
  v.n = n;
  v.t_comp = Expr::rational(0);
  v.x_comp.assign(n, Expr::rational(0));
  v.y_comp.assign(n, Expr::rational(0));
  return v;
}

VectorField VectorField::simplified() const {
  VectorField v = *this;
  v.t_comp = simplify(v.t_comp);
  for (auto& e : v.x_comp) e = simplify(e);
  for (auto& e : v.y_comp) e = simplify(e);
  return v;
}

std::string FrameIndex::name(int n) const {
  if (is_time()) return "t";
  if (is_space(n)) return "x" + std::to_string(code);
  return "y" + std::to_string(code - n);
}

int frame_count(int n) { return 2 * n + 1; }

VectorField frame_field(FrameIndex A, int n) {
  VectorField v = VectorField::zero(n);
  if (A.is_time()) {
    v.t_comp = Expr::rational(1);
  } else if (A.is_space(n)) {
    v.x_comp[A.space_index(n) - 1] = Expr::rational(1);
  } else {
    v.y_comp[A.fiber_index(n) - 1] = Expr::rational(1);
  }
  return v;
}

Expr apply_vector_field(const VectorField& X, const Expr& f, const NonlinearConnection& gamma) {
  AdaptedFrame frame(gamma);
  std::vector<Expr> terms;
  if (!X.t_comp.is_zero()) terms.push_back(X.t_comp * frame.delta_t(f));
  for (int i = 0; i < X.n; ++i)
    if (!X.x_comp[i].is_zero()) terms.push_back(X.x_comp[i] * frame.delta_x(i + 1, f));
  for (int i = 0; i < X.n; ++i)
    if (!X.y_comp[i].is_zero()) terms.push_back(X.y_comp[i] * frame.partial_y(i + 1, f));
  return simplify(Expr::sum(std::move(terms)));
}

namespace {

// coordinate components (d/dt, d/dx^i, d/dy^i) of a field given in adapted ones
struct CoordField {
  Expr t;
  std::vector<Expr> x, y;
};

CoordField to_coordinates(const VectorField& X, const NonlinearConnection& g) {
  CoordField c;
  c.t = X.t_comp;
  c.x = X.x_comp;
  c.y.assign(X.n, Expr::rational(0));
  for (int j = 0; j < X.n; ++j) {
    std::vector<Expr> terms{X.y_comp[j], -(X.t_comp * g.M[j])};
    for (int i = 0; i < X.n; ++i) terms.push_back(-(X.x_comp[i] * g.N[j][i]));
    c.y[j] = Expr::sum(std::move(terms));
  }
  return c;
}

VectorField to_adapted(const CoordField& c, const NonlinearConnection& g) {
  VectorField v;
  v.n = static_cast<int>(c.x.size());
  v.t_comp = c.t;
  v.x_comp = c.x;
  v.y_comp.assign(v.n, Expr::rational(0));
  for (int j = 0; j < v.n; ++j) {
    std::vector<Expr> terms{c.y[j], c.t * g.M[j]};
    for (int i = 0; i < v.n; ++i) terms.push_back(c.x[i] * g.N[j][i]);
    v.y_comp[j] = simplify(Expr::sum(std::move(terms)));
  }
  v.t_comp = simplify(v.t_comp);
  for (auto& e : v.x_comp) e = simplify(e);
  return v;
}

Expr coord_diff(const Expr& f, int coord_code, int n) {
  if (coord_code == 0) return diff(f, Coordinate::time());
  if (coord_code <= n) return diff(f, Coordinate::space(coord_code));
  return diff(f, Coordinate::fiber(coord_code - n));
}

}  // namespace

VectorField lie_bracket(const VectorField& X, const VectorField& Y,
                        const NonlinearConnection& gamma) {
  const int n = gamma.n;
  CoordField cx = to_coordinates(X, gamma);
  CoordField cy = to_coordinates(Y, gamma);

  auto comp = [&](const CoordField& c, int a) -> const Expr& {
    if (a == 0) return c.t;
    if (a <= n) return c.x[a - 1];
    return c.y[a - 1 - n];
  };

  CoordField out;
  out.x.assign(n, Expr::rational(0));
  out.y.assign(n, Expr::rational(0));
  const int total = 2 * n + 1;
  for (int a = 0; a < total; ++a) {
    std::vector<Expr> terms;
    for (int b = 0; b < total; ++b) {
      const Expr& xb = comp(cx, b);
      const Expr& yb = comp(cy, b);
      if (!xb.is_zero()) terms.push_back(xb * coord_diff(comp(cy, a), b, n));
      if (!yb.is_zero()) terms.push_back(-(yb * coord_diff(comp(cx, a), b, n)));
    }
    Expr v = simplify(Expr::sum(std::move(terms)));
    if (a == 0)
      out.t = v;
    else if (a <= n)
      out.x[a - 1] = v;
    else
      out.y[a - 1 - n] = v;
  }
  return to_adapted(out, gamma);
}

VectorField frame_bracket(const NonlinearConnection& gamma, FrameIndex A, FrameIndex B) {
  return lie_bracket(frame_field(A, gamma.n), frame_field(B, gamma.n), gamma);
}

NonlinearConnection nlc_transform(const NonlinearConnection& gamma, const ChartChange& change) {
  const int n = gamma.n;
  if (change.x_new.size() != static_cast<std::size_t>(n) ||
      change.x_old_of_new.size() != static_cast<std::size_t>(n))
    throw std::invalid_argument("nlc_transform: dimension mismatch");

  Expr dtilde_dt = simplify(diff(change.t_new, Coordinate::time()));
  if (dtilde_dt.is_zero())
    throw std::invalid_argument("nlc_transform: non-invertible time change (dt~/dt = 0)");
  Expr dt_dtilde = Expr::inv(dtilde_dt);  // as a function of the old t

  // Jacobian of x~(x) and, via the supplied inverse, of x(x~) pulled back to
  // old coordinates.
  ExprMatrix jac(n, std::vector<Expr>(n, Expr::rational(0)));
  for (int k = 0; k < n; ++k)
    for (int j = 0; j < n; ++j) jac[k][j] = simplify(diff(change.x_new[k], Coordinate::space(j + 1)));

  std::vector<std::pair<Coordinate, Expr>> new_to_old;
  new_to_old.emplace_back(Coordinate::time(), change.t_new);
  for (int i = 0; i < n; ++i)
    new_to_old.emplace_back(Coordinate::space(i + 1), change.x_new[i]);

  ExprMatrix inv_jac(n, std::vector<Expr>(n, Expr::rational(0)));  // dx^i/dx~^l, old coords
  for (int i = 0; i < n; ++i)
    for (int l = 0; l < n; ++l)
      inv_jac[i][l] =
          simplify(substitute(diff(change.x_old_of_new[i], Coordinate::space(l + 1)), new_to_old));

  // y~^k as a function of the old coordinates
  std::vector<Expr> y_tilde(n, Expr::rational(0));
  for (int k = 0; k < n; ++k) {
    std::vector<Expr> terms;
    for (int j = 0; j < n; ++j)
      terms.push_back(jac[k][j] * dt_dtilde * Expr::var(Coordinate::fiber(j + 1)));
    y_tilde[k] = simplify(Expr::sum(std::move(terms)));
  }

  // transformation rules, assembled in old coordinates
  std::vector<Expr> M_new(n, Expr::rational(0));
  ExprMatrix N_new(n, std::vector<Expr>(n, Expr::rational(0)));
  for (int k = 0; k < n; ++k) {
    std::vector<Expr> terms;
    for (int j = 0; j < n; ++j)
      terms.push_back(gamma.M[j] * Expr::power(dtilde_dt, Rational(-2)) * jac[k][j]);
    terms.push_back(-(dt_dtilde * diff(y_tilde[k], Coordinate::time())));
    M_new[k] = Expr::sum(std::move(terms));
  }
  for (int k = 0; k < n; ++k) {
    for (int l = 0; l < n; ++l) {
      std::vector<Expr> terms;
      for (int j = 0; j < n; ++j)
        for (int i = 0; i < n; ++i)
          terms.push_back(gamma.N[j][i] * dt_dtilde * inv_jac[i][l] * jac[k][j]);
      for (int i = 0; i < n; ++i)
        terms.push_back(-(inv_jac[i][l] * diff(y_tilde[k], Coordinate::space(i + 1))));
      N_new[k][l] = Expr::sum(std::move(terms));
    }
  }

  // rewrite in the new coordinates: old t, x from the inverse maps and old y
  // from the inverse jet rule y^j = (dx^j/dx~^m)(dt~/dt) y~^m
  Expr dtilde_dt_new = Expr::inv(simplify(diff(change.t_old_of_new, Coordinate::time())));
  ExprMatrix inv_jac_new(n, std::vector<Expr>(n, Expr::rational(0)));
  for (int j = 0; j < n; ++j)
    for (int m = 0; m < n; ++m)
      inv_jac_new[j][m] = simplify(diff(change.x_old_of_new[j], Coordinate::space(m + 1)));

  std::vector<std::pair<Coordinate, Expr>> old_to_new;
  old_to_new.emplace_back(Coordinate::time(), change.t_old_of_new);
  for (int i = 0; i < n; ++i)
    old_to_new.emplace_back(Coordinate::space(i + 1), change.x_old_of_new[i]);
  for (int j = 0; j < n; ++j) {
    std::vector<Expr> terms;
    for (int m = 0; m < n; ++m)
      terms.push_back(inv_jac_new[j][m] * dtilde_dt_new * Expr::var(Coordinate::fiber(m + 1)));
    old_to_new.emplace_back(Coordinate::fiber(j + 1), Expr::sum(std::move(terms)));
  }

  for (int k = 0; k < n; ++k) {
    M_new[k] = simplify(substitute(M_new[k], old_to_new));
    for (int l = 0; l < n; ++l) N_new[k][l] = simplify(substitute(N_new[k][l], old_to_new));
  }
  return NonlinearConnection(n, std::move(M_new), std::move(N_new));
}

}  // namespace jetcartan
