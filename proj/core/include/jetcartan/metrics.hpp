#pragma once

#include <vector>

#include "jetcartan/dtensor.hpp"
#include "jetcartan/expr.hpp"

namespace jetcartan {

using ExprMatrix = std::vector<std::vector<Expr>>;

/// Riemannian metric h = (h11(t)) on the time manifold. Positivity is a
/// sampling-time obligation, not a construction-time one.
struct TemporalMetric {
  Expr h11;

  explicit TemporalMetric(Expr h);
};

/// Riemannian metric phi = (phi_ij(x)) on the spatial manifold; symmetric as
/// expressions, positive definite at sample points.
struct SpatialMetric {
  int n;
  ExprMatrix phi;

  SpatialMetric(int n, ExprMatrix phi);
};

/// kappa^1_11 = (h^11 / 2) dh11/dt
Expr temporal_christoffel(const TemporalMetric& h);
/// first kind: kappa_111 = kappa^1_11 * h11 = (1/2) dh11/dt
Expr temporal_christoffel_first_kind(const TemporalMetric& h);

/// Closed-form inverse by adjugate over determinant; n <= 4.
ExprMatrix inverse_spatial_metric(const SpatialMetric& phi);

Expr metric_determinant(const SpatialMetric& phi);

/// gamma^i_jk = (phi^im / 2)(d_k phi_jm + d_j phi_km - d_m phi_jk);
/// signature [SpaceUpper, SpaceLower, SpaceLower], symmetric in the lower pair.
DTensor spatial_christoffel(const SpatialMetric& phi);

/// Classical curvature of gamma, the convention pinned so the Berwald check
/// R^l_ijk = r^l_ijk holds:
///   r^l_ijk = d_k gamma^l_ij - d_j gamma^l_ik
///           + gamma^r_ij gamma^l_rk - gamma^r_ik gamma^l_rj.
/// Signature [SpaceUpper, SpaceLower, SpaceLower, SpaceLower]; antisymmetric
/// in the last two slots. Contracting upper with the last slot gives Ricci.
DTensor spatial_riemann(const SpatialMetric& phi);

}  // namespace jetcartan
