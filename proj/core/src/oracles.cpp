#include "jetcartan/oracles.hpp"

namespace jetcartan {

FrameTensor::FrameTensor(int n_, int rank_) : n(n_), rank(rank_) {
  std::size_t total = 1;
  for (int i = 0; i < rank; ++i) total *= static_cast<std::size_t>(extent());
  comp.assign(total, Expr::rational(0));
}

std::size_t FrameTensor::flatten(const std::vector<int>& idx) const {
  if (static_cast<int>(idx.size()) != rank)
    throw std::invalid_argument("FrameTensor: rank mismatch");
  std::size_t flat = 0;
  for (int i : idx) {
    if (i < 0 || i >= extent()) throw std::out_of_range("FrameTensor: index out of range");
    flat = flat * extent() + static_cast<std::size_t>(i);
  }
  return flat;
}

Expr connection_coefficient(const GammaConnection& conn, FrameIndex dir, FrameIndex B,
                            FrameIndex A) {
  const int n = conn.n;
  Expr zero = Expr::rational(0);
  if (B.is_time()) {
    if (!A.is_time()) return zero;
    if (dir.is_time()) return conn.Gbar;
    if (dir.is_space(n)) return conn.Lbar[dir.space_index(n) - 1];
    return conn.Cbar[dir.fiber_index(n) - 1];
  }
  if (B.is_space(n)) {
    if (!A.is_space(n)) return zero;
    int i = B.space_index(n) - 1, k = A.space_index(n) - 1;
    if (dir.is_time()) return conn.G[k][i];
    if (dir.is_space(n)) return conn.L[k][i][dir.space_index(n) - 1];
    return conn.C[k][i][dir.fiber_index(n) - 1];
  }
  if (!A.is_fiber(n)) return zero;
  int i = B.fiber_index(n) - 1, k = A.fiber_index(n) - 1;
  if (dir.is_time()) return conn.Gfib[k][i];
  if (dir.is_space(n)) return conn.Lfib[k][i][dir.space_index(n) - 1];
  return conn.Cfib[k][i][dir.fiber_index(n) - 1];
}

namespace {

Expr frame_dir_deriv(const GammaConnection& conn, FrameIndex dir, const Expr& f) {
  AdaptedFrame frame(conn.nlc);
  const int n = conn.n;
  if (dir.is_time()) return frame.delta_t(f);
  if (dir.is_space(n)) return frame.delta_x(dir.space_index(n), f);
  return frame.partial_y(dir.fiber_index(n), f);
}

Expr& field_comp(VectorField& v, FrameIndex A, int n) {
  if (A.is_time()) return v.t_comp;
  if (A.is_space(n)) return v.x_comp[A.space_index(n) - 1];
  return v.y_comp[A.fiber_index(n) - 1];
}

const Expr& field_comp(const VectorField& v, FrameIndex A, int n) {
  if (A.is_time()) return v.t_comp;
  if (A.is_space(n)) return v.x_comp[A.space_index(n) - 1];
  return v.y_comp[A.fiber_index(n) - 1];
}

}  // namespace

VectorField nabla_frame(const GammaConnection& conn, FrameIndex dir, const VectorField& Y) {
  const int n = conn.n;
  VectorField out = VectorField::zero(n);
  for (int a = 0; a < frame_count(n); ++a) {
    FrameIndex A{a};
    std::vector<Expr> terms{frame_dir_deriv(conn, dir, field_comp(Y, A, n))};
    for (int b = 0; b < frame_count(n); ++b) {
      FrameIndex B{b};
      const Expr& yb = field_comp(Y, B, n);
      if (yb.is_zero()) continue;
      Expr g = connection_coefficient(conn, dir, B, A);
      if (g.is_zero()) continue;
      terms.push_back(yb * g);
    }
    field_comp(out, A, n) = simplify(Expr::sum(std::move(terms)));
  }
  return out;
}

VectorField nabla(const GammaConnection& conn, const VectorField& X, const VectorField& Y) {
  const int n = conn.n;
  VectorField out = VectorField::zero(n);
  for (int d = 0; d < frame_count(n); ++d) {
    FrameIndex D{d};
    const Expr& xd = field_comp(X, D, n);
    if (xd.is_zero()) continue;
    VectorField nd = nabla_frame(conn, D, Y);
    for (int a = 0; a < frame_count(n); ++a) {
      FrameIndex A{a};
      Expr& o = field_comp(out, A, n);
      o = o + xd * field_comp(nd, A, n);
    }
  }
  return out.simplified();
}

FrameTensor torsion_frame(const GammaConnection& conn) {
  const int n = conn.n;
  const int m = frame_count(n);
  FrameTensor tf(n, 3);
  for (int a = 0; a < m; ++a) {
    FrameIndex A{a};
    VectorField XA = frame_field(A, n);
    for (int b = a + 1; b < m; ++b) {
      FrameIndex B{b};
      VectorField XB = frame_field(B, n);
      VectorField nab = nabla_frame(conn, A, XB);
      VectorField nba = nabla_frame(conn, B, XA);
      VectorField br = lie_bracket(XA, XB, conn.nlc);
      for (int f = 0; f < m; ++f) {
        FrameIndex F{f};
        Expr comp = simplify(field_comp(nab, F, n) - field_comp(nba, F, n) -
                             field_comp(br, F, n));
        // T(X_A, X_B) = T^F_{BA} X_F: printed lower order (B, A)
        tf.at({f, b, a}) = comp;
        tf.at({f, a, b}) = simplify(-comp);
      }
    }
  }
  return tf;
}

FrameTensor curvature_frame(const GammaConnection& conn) {
  const int n = conn.n;
  const int m = frame_count(n);
  FrameTensor rf(n, 4);

  // nabla_B X_C for all (B, C): the connection coefficients as vector fields
  std::vector<std::vector<VectorField>> nbc(m, std::vector<VectorField>(m));
  for (int b = 0; b < m; ++b)
    for (int c = 0; c < m; ++c)
      nbc[b][c] = nabla_frame(conn, FrameIndex{b}, frame_field(FrameIndex{c}, n));

  for (int a = 0; a < m; ++a) {
    FrameIndex A{a};
    VectorField XA = frame_field(A, n);
    for (int b = a + 1; b < m; ++b) {
      FrameIndex B{b};
      VectorField XB = frame_field(B, n);
      VectorField br = lie_bracket(XA, XB, conn.nlc);
      for (int c = 0; c < m; ++c) {
        VectorField XC = frame_field(FrameIndex{c}, n);
        VectorField t1 = nabla_frame(conn, A, nbc[b][c]);
        VectorField t2 = nabla_frame(conn, B, nbc[a][c]);
        VectorField t3 = nabla(conn, br, XC);
        for (int f = 0; f < m; ++f) {
          FrameIndex F{f};
          Expr comp = simplify(field_comp(t1, F, n) - field_comp(t2, F, n) -
                               field_comp(t3, F, n));
          // R(X_A, X_B) X_C = R^F_{CBA} X_F: printed lower order (C, B, A)
          rf.at({f, c, b, a}) = comp;
          rf.at({f, c, a, b}) = simplify(-comp);
        }
      }
    }
  }
  return rf;
}

FrameTensor frame_cov_deriv(const FrameTensor& T, const GammaConnection& conn,
                            const std::vector<bool>& upper) {
  if (static_cast<int>(upper.size()) != T.rank)
    throw std::invalid_argument("frame_cov_deriv: variance list does not match rank");
  const int n = T.n;
  const int m = frame_count(n);
  FrameTensor out(n, T.rank + 1);

  std::vector<int> idx(T.rank, 0);
  const std::size_t total = T.comp.size();
  for (std::size_t flat = 0; flat < total; ++flat) {
    std::size_t rest = flat;
    for (int s = T.rank - 1; s >= 0; --s) {
      idx[s] = static_cast<int>(rest % m);
      rest /= m;
    }
    for (int d = 0; d < m; ++d) {
      FrameIndex dir{d};
      std::vector<Expr> terms{frame_dir_deriv(conn, dir, T.comp[flat])};
      for (int s = 0; s < T.rank; ++s) {
        std::vector<int> idx2 = idx;
        for (int g = 0; g < m; ++g) {
          idx2[s] = g;
          const Expr& comp = T.comp[T.flatten(idx2)];
          if (comp.is_zero()) continue;
          Expr coeff = upper[s]
                           ? connection_coefficient(conn, dir, FrameIndex{g}, FrameIndex{idx[s]})
                           : connection_coefficient(conn, dir, FrameIndex{idx[s]}, FrameIndex{g});
          if (coeff.is_zero()) continue;
          Expr t = comp * coeff;
          terms.push_back(upper[s] ? t : -t);
        }
      }
      std::vector<int> oidx = idx;
      oidx.push_back(d);
      out.comp[out.flatten(oidx)] = simplify(Expr::sum(std::move(terms)));
    }
  }
  return out;
}

namespace {

int sp(int i, int) { return 1 + i; }       // 0-based space index -> frame code
int fb(int i, int n) { return 1 + n + i; }  // 0-based fiber index -> frame code

}  // namespace

TorsionTable torsion_table_from_frame(const FrameTensor& tf) {
  const int n = tf.n;
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
      t.T_time.at({r, 0, j}) = tf.at({sp(r, n), 0, sp(j, n)});
      t.R_time.at({r, 0, j}) = tf.at({fb(r, n), 0, sp(j, n)});
      t.P_time.at({r, 0, j}) = tf.at({fb(r, n), 0, fb(j, n)});
      for (int i = 0; i < n; ++i) {
        t.T_space.at({r, i, j}) = tf.at({sp(r, n), sp(i, n), sp(j, n)});
        t.R_space.at({r, i, j}) = tf.at({fb(r, n), sp(i, n), sp(j, n)});
        t.P_chor.at({r, i, j}) = tf.at({sp(r, n), sp(i, n), fb(j, n)});
        t.P_space.at({r, i, j}) = tf.at({fb(r, n), sp(i, n), fb(j, n)});
        t.S_vert.at({r, i, j}) = tf.at({fb(r, n), fb(i, n), fb(j, n)});
      }
    }
  }
  return t;
}

TorsionTable torsion_oracle(const GammaConnection& conn) {
  return torsion_table_from_frame(torsion_frame(conn));
}

CurvatureTable curvature_table_from_frame(const FrameTensor& rf) {
  const int n = rf.n;
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
        c.R_time.at({l, i, 0, k}) = rf.at({sp(l, n), sp(i, n), 0, sp(k, n)});
        c.P_time.at({l, i, 0, k}) = rf.at({sp(l, n), sp(i, n), 0, fb(k, n)});
        for (int j = 0; j < n; ++j) {
          c.R_space.at({l, i, j, k}) = rf.at({sp(l, n), sp(i, n), sp(j, n), sp(k, n)});
          c.P_space.at({l, i, j, k}) = rf.at({sp(l, n), sp(i, n), sp(j, n), fb(k, n)});
          c.S_vert.at({l, i, j, k}) = rf.at({sp(l, n), sp(i, n), fb(j, n), fb(k, n)});
        }
      }
    }
  }
  return c;
}

CurvatureTable curvature_oracle(const GammaConnection& conn) {
  return curvature_table_from_frame(curvature_frame(conn));
}

FrameTensor torsion_frame_from_table(const TorsionTable& t, int n) {
  FrameTensor tf(n, 3);
  auto set = [&](int f, int p, int q, const Expr& v) {
    tf.at({f, p, q}) = v;
    tf.at({f, q, p}) = simplify(-v);
  };
  for (int r = 0; r < n; ++r) {
    for (int j = 0; j < n; ++j) {
      set(sp(r, n), 0, sp(j, n), t.T_time.at({r, 0, j}));
      set(fb(r, n), 0, sp(j, n), t.R_time.at({r, 0, j}));
      set(fb(r, n), 0, fb(j, n), t.P_time.at({r, 0, j}));
      for (int i = 0; i < n; ++i) {
        // already antisymmetric across (i, j); fill directly
        tf.at({sp(r, n), sp(i, n), sp(j, n)}) = t.T_space.at({r, i, j});
        tf.at({fb(r, n), sp(i, n), sp(j, n)}) = t.R_space.at({r, i, j});
        set(sp(r, n), sp(i, n), fb(j, n), t.P_chor.at({r, i, j}));
        set(fb(r, n), sp(i, n), fb(j, n), t.P_space.at({r, i, j}));
        tf.at({fb(r, n), fb(i, n), fb(j, n)}) = t.S_vert.at({r, i, j});
      }
    }
  }
  return tf;
}

FrameTensor curvature_frame_from_table(const CurvatureTable& c, int n) {
  FrameTensor rf(n, 4);
  auto set = [&](int f, int p, int q, int s, const Expr& v) {
    rf.at({f, p, q, s}) = v;
    rf.at({f, p, s, q}) = simplify(-v);
  };
  for (int l = 0; l < n; ++l) {
    for (int i = 0; i < n; ++i) {
      for (int k = 0; k < n; ++k) {
        const Expr& rt = c.R_time.at({l, i, 0, k});
        set(sp(l, n), sp(i, n), 0, sp(k, n), rt);
        set(fb(l, n), fb(i, n), 0, sp(k, n), rt);
        const Expr& pt = c.P_time.at({l, i, 0, k});
        set(sp(l, n), sp(i, n), 0, fb(k, n), pt);
        set(fb(l, n), fb(i, n), 0, fb(k, n), pt);
        for (int j = 0; j < n; ++j) {
          const Expr& rs = c.R_space.at({l, i, j, k});
          rf.at({sp(l, n), sp(i, n), sp(j, n), sp(k, n)}) = rs;
          rf.at({fb(l, n), fb(i, n), sp(j, n), sp(k, n)}) = rs;
          const Expr& ps = c.P_space.at({l, i, j, k});
          set(sp(l, n), sp(i, n), sp(j, n), fb(k, n), ps);
          set(fb(l, n), fb(i, n), sp(j, n), fb(k, n), ps);
          const Expr& sv = c.S_vert.at({l, i, j, k});
          rf.at({sp(l, n), sp(i, n), fb(j, n), fb(k, n)}) = sv;
          rf.at({fb(l, n), fb(i, n), fb(j, n), fb(k, n)}) = sv;
        }
      }
    }
  }
  return rf;
}

}  // namespace jetcartan
