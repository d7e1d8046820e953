#pragma once

#include "jetcartan/covderiv.hpp"

namespace jetcartan {

/// The eight effective torsion d-tensors of an h-normal connection, stored
/// with their full slot signatures so covariant derivatives apply mechanically.
struct TorsionTable {
  DTensor T_time;   // T^r_{1j}            [S^ T_ S_]   = -G^r_{j1}
  DTensor R_time;   // R^(r)_(1)1j         [F^ T_ S_]   = dM/dx^j - dN_j/dt (adapted)
  DTensor T_space;  // T^r_{ij}            [S^ S_ S_]   = L^r_{ij} - L^r_{ji}
  DTensor R_space;  // R^(r)_(1)ij         [F^ S_ S_]   = dN_i/dx^j - dN_j/dx^i (adapted)
  DTensor P_time;   // P^(r)(1)_(1)1(j)    [F^ T_ F_]   = dM/dy^j - G^r_{j1} + delta kappa
  DTensor P_chor;   // P^{r(1)}_{i(j)}     [S^ S_ F_]   = C^r_{i(j)}
  DTensor P_space;  // P^(r)(1)_(1)i(j)    [F^ S_ F_]   = dN_i/dy^j - L^r_{ji}
  DTensor S_vert;   // S^(r)(1)(1)_(1)(i)(j) [F^ F_ F_] = C^r_{i(j)} - C^r_{j(i)}
};

/// The five effective curvature d-tensors of an h-normal connection. The
/// vertical blocks of the full curvature coincide with these by construction.
struct CurvatureTable {
  DTensor R_time;   // R^l_{i1k}     [S^ S_ T_ S_]
  DTensor R_space;  // R^l_{ijk}     [S^ S_ S_ S_]
  DTensor P_time;   // P^{l(1)}_{i1(k)} [S^ S_ T_ F_]
  DTensor P_space;  // P^{l(1)}_{ij(k)} [S^ S_ S_ F_]
  DTensor S_vert;   // S^{l(1)(1)}_{i(j)(k)} [S^ S_ F_ F_]
};

struct NotHNormal : std::runtime_error {
  explicit NotHNormal(const char* op)
      : std::runtime_error(std::string(op) + ": connection is not h-normal") {}
};

/// Closed forms of the eight torsion components; requires an h-normal input.
TorsionTable torsion_table(const GammaConnection& conn);

/// Closed forms of the five curvature components; requires an h-normal input.
CurvatureTable curvature_table(const GammaConnection& conn);

}  // namespace jetcartan
