#pragma once

#include <optional>

#include "jetcartan/dtensor.hpp"
#include "jetcartan/nonlinear.hpp"

namespace jetcartan {

using ExprCube = std::vector<ExprMatrix>;

/// A Gamma-linear connection through its nine adapted component families.
/// Index conventions (all 0-based in storage, upper index first):
///   nabla_{delta_t}  delta_t  = Gbar          delta_t
///   nabla_{delta_t}  delta_xi = G[k][i]       delta_xk
///   nabla_{delta_t}  d_yi     = Gfib[k][i]    d_yk
///   nabla_{delta_xj} delta_t  = Lbar[j]       delta_t
///   nabla_{delta_xj} delta_xi = L[k][i][j]    delta_xk
///   nabla_{delta_xj} d_yi     = Lfib[k][i][j] d_yk
///   nabla_{d_yj}     delta_t  = Cbar[j]       delta_t
///   nabla_{d_yj}     delta_xi = C[k][i][j]    delta_xk
///   nabla_{d_yj}     d_yi     = Cfib[k][i][j] d_yk
struct GammaConnection {
  int n = 0;
  NonlinearConnection nlc;

  Expr Gbar;
  ExprMatrix G;
  ExprMatrix Gfib;
  std::vector<Expr> Lbar;
  ExprCube L;
  ExprCube Lfib;
  std::vector<Expr> Cbar;
  ExprCube C;
  ExprCube Cfib;

  bool h_normal = false;
  bool cartan = false;
  std::optional<TemporalMetric> h;  // present when built as h-normal

  static GammaConnection general(NonlinearConnection nlc, Expr Gbar, ExprMatrix G,
                                 ExprMatrix Gfib, std::vector<Expr> Lbar, ExprCube L,
                                 ExprCube Lfib, std::vector<Expr> Cbar, ExprCube C,
                                 ExprCube Cfib);
  static GammaConnection zero(NonlinearConnection nlc);

  GammaConnection simplified() const;
};

/// The four effective families (kappa, G, L, C) of an h-normal connection.
struct HNormalData {
  TemporalMetric h;
  ExprMatrix G;  // G^k_{i1}
  ExprCube L;    // L^k_{ij}, Cartan type requires symmetry in (i, j)
  ExprCube C;    // C^{k(1)}_{i(j)}, Cartan type requires symmetry in (i, j)
};

struct SymmetryViolation : std::runtime_error {
  SymmetryViolation(const std::string& family, int k, int i, int j)
      : std::runtime_error("Cartan symmetry violated: " + family + "^" + std::to_string(k + 1) +
                           "_(" + std::to_string(i + 1) + "," + std::to_string(j + 1) + ")"),
        family(family), k(k), i(i), j(j) {}
  std::string family;
  int k, i, j;
};

/// Completes (kappa, G, L, C) to all nine families:
/// Gbar = kappa, Lbar = 0, Cbar = 0, Gfib = G - delta kappa, Lfib = L, Cfib = C.
/// Rejects data violating the Cartan symmetries (symbolically, with a
/// deterministic 20-point numeric fallback for expressions that do not cancel
/// structurally).
GammaConnection make_h_normal_cartan(const HNormalData& data, const NonlinearConnection& nlc);

/// The connection (kappa, 0, gamma, 0) over the canonical nonlinear connection.
GammaConnection berwald(const TemporalMetric& h, const SpatialMetric& phi);

/// h-normalization d-tensor J^(i)_(1)1j = h11 delta^i_j;
/// signature [FiberUpper, TimeLower, SpaceLower].
DTensor h_normalization_tensor(const TemporalMetric& h, int n);

}  // namespace jetcartan
