#include "jetcartan/tables.hpp"

namespace jetcartan {

TorsionTable torsion_table(const GammaConnection& conn) {
  if (!conn.h_normal) throw NotHNormal("torsion_table");
  const int n = conn.n;
  const NonlinearConnection& nlc = conn.nlc;
  AdaptedFrame frame(nlc);
  Expr kappa = conn.Gbar;  // h-normal: Gbar = kappa

  TorsionTable t{
      DTensor(n, {SlotKind::SpaceUpper, SlotKind::TimeLower, SlotKind::SpaceLower}),
      DTensor(n, {SlotKind::FiberUpper, SlotKind::TimeLower, SlotKind::SpaceLower}),
      DTensor(n, {SlotKind::SpaceUpper, SlotKind::SpaceLower, SlotKind::SpaceLower}),
      DTensor(n, {SlotKind::FiberUpper, SlotKind::SpaceLower, SlotKind::SpaceLower}),
      DTensor(n, {SlotKind::FiberUpper, SlotKind::TimeLower, SlotKind::FiberLower}),
      DTensor(n, {SlotKind::SpaceUpper, SlotKind::SpaceLower, SlotKind::FiberLower}),
      DTensor(n, {SlotKind::FiberUpper, SlotKind::SpaceLower, SlotKind::FiberLower}),
      DTensor(n, {SlotKind::FiberUpper, SlotKind::FiberLower, SlotKind::FiberLower})};

  for (int r = 0; r < n; ++r) {
    for (int j = 0; j < n; ++j) {
      // 1. T^r_{1j} = -G^r_{j1}
      t.T_time.at({r, 0, j}) = simplify(-conn.G[r][j]);
      // 2. R^(r)_(1)1j = delta M^(r) / delta x^j - delta N^(r)_j / delta t
      t.R_time.at({r, 0, j}) =
          simplify(frame.delta_x(j + 1, nlc.M[r]) - frame.delta_t(nlc.N[r][j]));
      // 5. P^(r)_(1)1(j) = dM^(r)/dy^j - G^r_{j1} + delta^r_j kappa
      Expr p = diff(nlc.M[r], Coordinate::fiber(j + 1)) - conn.G[r][j];
      if (r == j) p = p + kappa;
      t.P_time.at({r, 0, j}) = simplify(p);
      for (int i = 0; i < n; ++i) {
        // 3. T^r_{ij} = L^r_{ij} - L^r_{ji}
        t.T_space.at({r, i, j}) = simplify(conn.L[r][i][j] - conn.L[r][j][i]);
        // 4. R^(r)_(1)ij = delta N^(r)_i / delta x^j - delta N^(r)_j / delta x^i
        t.R_space.at({r, i, j}) =
            simplify(frame.delta_x(j + 1, nlc.N[r][i]) - frame.delta_x(i + 1, nlc.N[r][j]));
        // 6. P^{r(1)}_{i(j)} = C^{r(1)}_{i(j)}
        t.P_chor.at({r, i, j}) = conn.C[r][i][j];
        // 7. P^(r)_(1)i(j) = dN^(r)_i/dy^j - L^r_{ji}
        t.P_space.at({r, i, j}) =
            simplify(diff(nlc.N[r][i], Coordinate::fiber(j + 1)) - conn.L[r][j][i]);
        // 8. S^(r)_(1)(i)(j) = C^r_{i(j)} - C^r_{j(i)}
        t.S_vert.at({r, i, j}) = simplify(conn.C[r][i][j] - conn.C[r][j][i]);
      }
    }
  }
  return t;
}

CurvatureTable curvature_table(const GammaConnection& conn) {
  if (!conn.h_normal) throw NotHNormal("curvature_table");
  const int n = conn.n;
  AdaptedFrame frame(conn.nlc);
  TorsionTable tors = torsion_table(conn);

  // C as a d-tensor, for its covariant derivatives in formulas 3 and 4
  DTensor Cten(n, {SlotKind::SpaceUpper, SlotKind::SpaceLower, SlotKind::FiberLower});
  for (int l = 0; l < n; ++l)
    for (int i = 0; i < n; ++i)
      for (int k = 0; k < n; ++k) Cten.at({l, i, k}) = conn.C[l][i][k];
  DTensor C_dt = cov_deriv(Cten, conn, DerivKind::Temporal);  // C^l_{i(k)/1}
  DTensor C_dx = cov_deriv(Cten, conn, DerivKind::Spatial);   // C^l_{i(k)|j}

  CurvatureTable c{
      DTensor(n, {SlotKind::SpaceUpper, SlotKind::SpaceLower, SlotKind::TimeLower,
                  SlotKind::SpaceLower}),
      DTensor(n, {SlotKind::SpaceUpper, SlotKind::SpaceLower, SlotKind::SpaceLower,
                  SlotKind::SpaceLower}),
      DTensor(n, {SlotKind::SpaceUpper, SlotKind::SpaceLower, SlotKind::TimeLower,
                  SlotKind::FiberLower}),
      DTensor(n, {SlotKind::SpaceUpper, SlotKind::SpaceLower, SlotKind::SpaceLower,
                  SlotKind::FiberLower}),
      DTensor(n, {SlotKind::SpaceUpper, SlotKind::SpaceLower, SlotKind::FiberLower,
                  SlotKind::FiberLower})};

  for (int l = 0; l < n; ++l) {
    for (int i = 0; i < n; ++i) {
      for (int k = 0; k < n; ++k) {
        // 1. R^l_{i1k} = dG^l_{i1}/dx^k - dL^l_{ik}/dt (adapted derivatives)
        //             + G^r_{i1} L^l_{rk} - L^r_{ik} G^l_{r1} + C^l_{i(r)} R^(r)_(1)1k
        {
          std::vector<Expr> terms{frame.delta_x(k + 1, conn.G[l][i]),
                                  -frame.delta_t(conn.L[l][i][k])};
          for (int r = 0; r < n; ++r) {
            terms.push_back(conn.G[r][i] * conn.L[l][r][k]);
            terms.push_back(-(conn.L[r][i][k] * conn.G[l][r]));
            terms.push_back(conn.C[l][i][r] * tors.R_time.at({r, 0, k}));
          }
          c.R_time.at({l, i, 0, k}) = simplify(Expr::sum(std::move(terms)));
        }
        // 3. P^l_{i1(k)} = dG^l_{i1}/dy^k - C^l_{i(k)/1} + C^l_{i(r)} P^(r)_(1)1(k)
        {
          std::vector<Expr> terms{diff(conn.G[l][i], Coordinate::fiber(k + 1)),
                                  -C_dt.at({l, i, k, 0})};
          for (int r = 0; r < n; ++r)
            terms.push_back(conn.C[l][i][r] * tors.P_time.at({r, 0, k}));
          c.P_time.at({l, i, 0, k}) = simplify(Expr::sum(std::move(terms)));
        }
        for (int j = 0; j < n; ++j) {
          // 2. R^l_{ijk} = dL^l_{ij}/dx^k - dL^l_{ik}/dx^j (adapted derivatives)
          //             + L^r_{ij} L^l_{rk} - L^r_{ik} L^l_{rj} + C^l_{i(r)} R^(r)_(1)jk
          {
            std::vector<Expr> terms{frame.delta_x(k + 1, conn.L[l][i][j]),
                                    -frame.delta_x(j + 1, conn.L[l][i][k])};
            for (int r = 0; r < n; ++r) {
              terms.push_back(conn.L[r][i][j] * conn.L[l][r][k]);
              terms.push_back(-(conn.L[r][i][k] * conn.L[l][r][j]));
              terms.push_back(conn.C[l][i][r] * tors.R_space.at({r, j, k}));
            }
            c.R_space.at({l, i, j, k}) = simplify(Expr::sum(std::move(terms)));
          }
          // 4. P^l_{ij(k)} = dL^l_{ij}/dy^k - C^l_{i(k)|j} + C^l_{i(r)} P^(r)_(1)j(k)
          {
            std::vector<Expr> terms{diff(conn.L[l][i][j], Coordinate::fiber(k + 1)),
                                    -C_dx.at({l, i, k, j})};
            for (int r = 0; r < n; ++r)
              terms.push_back(conn.C[l][i][r] * tors.P_space.at({r, j, k}));
            c.P_space.at({l, i, j, k}) = simplify(Expr::sum(std::move(terms)));
          }
          // 5. S^l_{i(j)(k)} = dC^l_{i(j)}/dy^k - dC^l_{i(k)}/dy^j
          //               + C^r_{i(j)} C^l_{r(k)} - C^r_{i(k)} C^l_{r(j)}
          {
            std::vector<Expr> terms{diff(conn.C[l][i][j], Coordinate::fiber(k + 1)),
                                    -diff(conn.C[l][i][k], Coordinate::fiber(j + 1))};
            for (int r = 0; r < n; ++r) {
              terms.push_back(conn.C[r][i][j] * conn.C[l][r][k]);
              terms.push_back(-(conn.C[r][i][k] * conn.C[l][r][j]));
            }
            c.S_vert.at({l, i, j, k}) = simplify(Expr::sum(std::move(terms)));
          }
        }
      }
    }
  }
  return c;
}

}  // namespace jetcartan
