#pragma once

#include "jetcartan/tables.hpp"

namespace jetcartan {

/// Dense tensor over adapted-frame indices {time, space 1..n, fiber 1..n}
/// (extent 2n+1 per index). Used by the definition-based oracles and the
/// general Bianchi identities, where one index runs over all three bands.
struct FrameTensor {
  int n = 0;
  int rank = 0;
  std::vector<Expr> comp;

  FrameTensor() = default;
  FrameTensor(int n, int rank);

  int extent() const { return 2 * n + 1; }
  std::size_t flatten(const std::vector<int>& idx) const;
  Expr& at(const std::vector<int>& idx) { return comp[flatten(idx)]; }
  const Expr& at(const std::vector<int>& idx) const { return comp[flatten(idx)]; }
};

/// Coefficient of X_A in nabla_{X_dir} X_B; zero unless A and B are in the
/// same distribution (Gamma-linear connections preserve the three splits).
Expr connection_coefficient(const GammaConnection& conn, FrameIndex dir, FrameIndex B,
                            FrameIndex A);

/// nabla_{X_dir} Y for an arbitrary vector field Y in adapted components.
VectorField nabla_frame(const GammaConnection& conn, FrameIndex dir, const VectorField& Y);

/// nabla_X Y, tensorial in X (X with arbitrary Expr components).
VectorField nabla(const GammaConnection& conn, const VectorField& X, const VectorField& Y);

/// Torsion from the definition T(X,Y) = nabla_X Y - nabla_Y X - [X,Y],
/// stored with the printed index order T(X_A, X_B) = T^D_{BA} X_D:
/// comp[F][P][Q] = coefficient of X_F in T(X_Q, X_P). Rank 3.
FrameTensor torsion_frame(const GammaConnection& conn);

/// Curvature from the definition R(X,Y)Z = nabla_X nabla_Y Z - nabla_Y
/// nabla_X Z - nabla_{[X,Y]} Z, with the printed order R(X_A, X_B) X_C =
/// R^D_{CBA} X_D: comp[F][P][Q][S] = coefficient of X_F in R(X_S, X_Q) X_P.
/// Rank 4.
FrameTensor curvature_frame(const GammaConnection& conn);

/// Covariant derivative of frame-indexed components ":C"; appends one frame
/// index (the direction) last. upper[k] marks which original indices are
/// contravariant (the first `n_upper` by convention here: index 0).
FrameTensor frame_cov_deriv(const FrameTensor& T, const GammaConnection& conn,
                            const std::vector<bool>& upper);

/// The torsion table blocks read out of the oracle's frame tensor.
TorsionTable torsion_oracle(const GammaConnection& conn);
TorsionTable torsion_table_from_frame(const FrameTensor& tf);

/// The curvature table blocks read out of the oracle's frame tensor.
CurvatureTable curvature_oracle(const GammaConnection& conn);
CurvatureTable curvature_table_from_frame(const FrameTensor& rf);

/// Embeds the h-normal closed-form tables into full frame layout (zero blocks
/// and the vertical-block duplications included) for wholesale comparison
/// against the oracle tensors.
FrameTensor torsion_frame_from_table(const TorsionTable& t, int n);
FrameTensor curvature_frame_from_table(const CurvatureTable& c, int n);

}  // namespace jetcartan
