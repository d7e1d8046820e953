#include "jetcartan/metrics.hpp"

#include <stdexcept>

namespace jetcartan {

namespace {

// dependency masks: t is bit 0, x_i bits 1..15, y_i bits 16..30
constexpr std::uint32_t kTimeOnly = 1u;
constexpr std::uint32_t kSpaceBand = 0x0000fffeu;

}  // namespace

TemporalMetric::TemporalMetric(Expr h) : h11(simplify(h)) {
  if ((h11.depends_mask() & ~kTimeOnly) != 0)
    throw std::invalid_argument("TemporalMetric: h11 must depend on t only");
}

SpatialMetric::SpatialMetric(int n_, ExprMatrix phi_) : n(n_), phi(std::move(phi_)) {
  if (n < 1) throw std::invalid_argument("SpatialMetric: dimension must be >= 1");
  if (phi.size() != static_cast<std::size_t>(n))
    throw std::invalid_argument("SpatialMetric: shape mismatch");
  for (auto& row : phi) {
    if (row.size() != static_cast<std::size_t>(n))
      throw std::invalid_argument("SpatialMetric: shape mismatch");
    for (auto& e : row) {
      e = simplify(e);
      if ((e.depends_mask() & ~kSpaceBand) != 0)
        throw std::invalid_argument("SpatialMetric: phi must depend on x only");
    }
  }
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      if (!is_symbolically_zero(phi[i][j] - phi[j][i]))
        throw std::invalid_argument("SpatialMetric: phi is not symmetric at (" +
                                    std::to_string(i + 1) + "," + std::to_string(j + 1) + ")");
}

Expr temporal_christoffel(const TemporalMetric& h) {
  Expr dh = diff(h.h11, Coordinate::time());
  return simplify(Expr::rational(1, 2) * Expr::inv(h.h11) * dh);
}

Expr temporal_christoffel_first_kind(const TemporalMetric& h) {
  return simplify(Expr::rational(1, 2) * diff(h.h11, Coordinate::time()));
}

namespace {

// Laplace expansion over the listed rows/columns.
Expr minor_det(const ExprMatrix& m, const std::vector<int>& rows, const std::vector<int>& cols) {
  if (rows.empty()) return Expr::rational(1);
  if (rows.size() == 1) return m[rows[0]][cols[0]];
  std::vector<Expr> terms;
  std::vector<int> subr(rows.begin() + 1, rows.end());
  for (std::size_t k = 0; k < cols.size(); ++k) {
    std::vector<int> subc;
    for (std::size_t j = 0; j < cols.size(); ++j)
      if (j != k) subc.push_back(cols[j]);
    Expr t = m[rows[0]][cols[k]] * minor_det(m, subr, subc);
    terms.push_back(k % 2 == 0 ? t : -t);
  }
  return Expr::sum(std::move(terms));
}

}  // namespace

Expr metric_determinant(const SpatialMetric& phi) {
  std::vector<int> all(phi.n);
  for (int i = 0; i < phi.n; ++i) all[i] = i;
  return simplify(minor_det(phi.phi, all, all));
}

ExprMatrix inverse_spatial_metric(const SpatialMetric& phi) {
  const int n = phi.n;
  if (n > 4)
    throw std::invalid_argument("inverse_spatial_metric: adjugate inverse limited to n <= 4");
  Expr inv_det = Expr::inv(metric_determinant(phi));

  ExprMatrix inv(n, std::vector<Expr>(n, Expr::rational(0)));
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      std::vector<int> rows, cols;
      for (int r = 0; r < n; ++r)
        if (r != j) rows.push_back(r);
      for (int c = 0; c < n; ++c)
        if (c != i) cols.push_back(c);
      Expr cof = minor_det(phi.phi, rows, cols);
      if ((i + j) % 2 == 1) cof = -cof;
      inv[i][j] = simplify(cof * inv_det);
    }
  }
  return inv;
}

DTensor spatial_christoffel(const SpatialMetric& phi) {
  const int n = phi.n;
  ExprMatrix inv = inverse_spatial_metric(phi);
  DTensor gamma(n, {SlotKind::SpaceUpper, SlotKind::SpaceLower, SlotKind::SpaceLower});
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      for (int k = 0; k < n; ++k) {
        std::vector<Expr> terms;
        for (int m = 0; m < n; ++m) {
          Expr bracket = diff(phi.phi[j][m], Coordinate::space(k + 1)) +
                         diff(phi.phi[k][m], Coordinate::space(j + 1)) -
                         diff(phi.phi[j][k], Coordinate::space(m + 1));
          terms.push_back(Expr::rational(1, 2) * inv[i][m] * bracket);
        }
        gamma.at({i, j, k}) = simplify(Expr::sum(std::move(terms)));
      }
    }
  }
  return gamma;
}

DTensor spatial_riemann(const SpatialMetric& phi) {
  const int n = phi.n;
  DTensor gamma = spatial_christoffel(phi);
  DTensor r(n, {SlotKind::SpaceUpper, SlotKind::SpaceLower, SlotKind::SpaceLower,
                SlotKind::SpaceLower});
  for (int l = 0; l < n; ++l) {
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        for (int k = 0; k < n; ++k) {
          std::vector<Expr> terms;
          terms.push_back(diff(gamma.at({l, i, j}), Coordinate::space(k + 1)));
          terms.push_back(-diff(gamma.at({l, i, k}), Coordinate::space(j + 1)));
          for (int m = 0; m < n; ++m) {
            terms.push_back(gamma.at({m, i, j}) * gamma.at({l, m, k}));
            terms.push_back(-(gamma.at({m, i, k}) * gamma.at({l, m, j})));
          }
          r.at({l, i, j, k}) = simplify(Expr::sum(std::move(terms)));
        }
      }
    }
  }
  return r;
}

}  // namespace jetcartan
