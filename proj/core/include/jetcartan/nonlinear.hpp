#pragma once

#include <vector>

#include "jetcartan/metrics.hpp"

namespace jetcartan {

/// Nonlinear connection on the 1-jet space: temporal components M^(j)_(1)1
/// (vector) and spatial components N^(j)_(1)i (matrix, upper index first).
struct NonlinearConnection {
  int n = 0;
  std::vector<Expr> M;  // M[j]
  ExprMatrix N;         // N[j][i]

  NonlinearConnection() = default;
  NonlinearConnection(int n, std::vector<Expr> M, ExprMatrix N);

  static NonlinearConnection zero(int n);
};

/// M^(j) = -kappa y^j, N^(j)_i = gamma^j_im y^m.
NonlinearConnection canonical_nlc(const TemporalMetric& h, const SpatialMetric& phi);

/// From a time-dependent semispray (H, G): M^(j) = 2 H^(j), N^(j)_k = dG^(j)/dy^k.
NonlinearConnection nlc_from_semispray(const std::vector<Expr>& H, const std::vector<Expr>& G);

/// Horizontal derivations of the adapted basis applied to scalars, plus the
/// coefficients of the vertical coframe delta y^i = dy^i + M^i dt + N^i_j dx^j.
class AdaptedFrame {
 public:
  explicit AdaptedFrame(const NonlinearConnection& gamma) : gamma_(gamma) {}

  /// delta f / delta t = df/dt - M^(j) df/dy^j
  Expr delta_t(const Expr& f) const;
  /// delta f / delta x^i = df/dx^i - N^(j)_i df/dy^j   (i is 1-based)
  Expr delta_x(int i, const Expr& f) const;
  Expr partial_y(int i, const Expr& f) const;

  const NonlinearConnection& connection() const { return gamma_; }

  Expr coframe_dt_coefficient(int i) const { return gamma_.M[i - 1]; }
  Expr coframe_dx_coefficient(int i, int j) const { return gamma_.N[i - 1][j - 1]; }

 private:
  const NonlinearConnection& gamma_;
};

/// A vector field written in the adapted frame {delta/delta t, delta/delta x^i,
/// d/dy^i}: X = t_comp * delta_t + x_comp[i] * delta_x_i + y_comp[i] * d_y_i.
struct VectorField {
  int n = 0;
  Expr t_comp;
  std::vector<Expr> x_comp;
  std::vector<Expr> y_comp;

  static VectorField zero(int n);

  VectorField simplified() const;
};

/// Frame index over {time, space 1..n, fiber 1..n}; codes 0, 1..n, n+1..2n.
struct FrameIndex {
  int code = 0;

  static FrameIndex time() { return {0}; }
  static FrameIndex space(int i) { return {i}; }          // 1-based
  static FrameIndex fiber(int i, int n) { return {n + i}; }

  bool is_time() const { return code == 0; }
  bool is_space(int n) const { return code >= 1 && code <= n; }
  bool is_fiber(int n) const { return code > n; }
  int space_index(int) const { return code; }              // 1-based
  int fiber_index(int n) const { return code - n; }        // 1-based
  std::string name(int n) const;
};

int frame_count(int n);  // 2n + 1

/// The adapted frame field X_A as a VectorField.
VectorField frame_field(FrameIndex A, int n);

/// X applied to a scalar (derivation through the adapted frame).
Expr apply_vector_field(const VectorField& X, const Expr& f, const NonlinearConnection& gamma);

/// Lie bracket of two vector fields, result in adapted components. Brackets of
/// adapted frame fields close into the vertical distribution.
VectorField lie_bracket(const VectorField& X, const VectorField& Y,
                        const NonlinearConnection& gamma);

VectorField frame_bracket(const NonlinearConnection& gamma, FrameIndex A, FrameIndex B);

/// A chart change: t~ = t~(t), x~^i = x~^i(x), with the inverse maps supplied
/// by the caller (inverse expressions are written in the same symbols, read as
/// functions of the new coordinates).
struct ChartChange {
  Expr t_new;                  // t~(t)
  std::vector<Expr> x_new;     // x~^i(x)
  Expr t_old_of_new;           // t(t~)
  std::vector<Expr> x_old_of_new;  // x^i(x~)
};

/// Transforms the components of a nonlinear connection under a chart change;
/// the result is expressed in the new coordinates (same symbols).
NonlinearConnection nlc_transform(const NonlinearConnection& gamma, const ChartChange& change);

}  // namespace jetcartan
