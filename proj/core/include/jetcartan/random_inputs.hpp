#pragma once

#include "jetcartan/connection.hpp"
#include "jetcartan/sampling.hpp"

namespace jetcartan {

/// Seeded builders for randomized testing: sparse polynomials of degree <= 2
/// in (t, x, y) with rational coefficients in [-2, 2], symmetrized where the
/// Cartan conditions demand.

Expr random_polynomial(Rng& rng, int n, int max_degree = 2, int terms = 4);

/// h11 = exp(a0 t + a1 t^2): positive everywhere with a polynomial
/// Christoffel symbol (a0 + 2 a1 t) / 2.
TemporalMetric random_temporal_metric(Rng& rng);

NonlinearConnection random_nlc(Rng& rng, int n);

/// Random (kappa, G, L, C) data with L and C symmetric in the lower pair.
HNormalData random_cartan_data(Rng& rng, int n);

/// Random h-normal Cartan-type connection over a random nonlinear connection.
GammaConnection random_cartan_connection(std::uint64_t seed, int n);

/// Random non-h-normal connection (all nine families random); exercises the
/// oracles and the general identities away from the h-normal class.
GammaConnection random_general_connection(std::uint64_t seed, int n);

/// Random polynomial d-vector field (X^1, X^i, X^(i)) for the Ricci suites.
VectorField random_dvector_field(Rng& rng, int n);

}  // namespace jetcartan
