#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <string>
#include <unordered_set>
#include <vector>

#include "diamondkite/mesh.hpp"

namespace dk {

/// Orthogonal circle packing: one circle per mesh vertex, centered there,
/// with radius equal to the distance from the vertex to the diagonal
/// crossing of every incident face (they all agree). Radii are stored
/// exactly as 4*r^2 in the lattice ring; floats are derived views.
struct CirclePacking {
  std::vector<SquaredLength> quarter_r2;  // indexed by vertex id
  std::vector<bool> present;

  double radius(VertexId v) const {
    return std::sqrt(quarter_r2[v].to_double()) / 2.0;
  }
};

/// 4 * dist(v, X_f)^2 where X_f is the diagonal crossing of face f. For
/// both shapes X_f is the midpoint of the diagonal joining corners 1 and 3
/// (the short diagonal of a kite, either diagonal of a diamond).
inline SquaredLength quarter_r2_in_face(const Mesh& m, FaceId f, VertexId v) {
  const QuadFace& q = m.face(f);
  LatticeCoord s = add(m.vertex(q.corners[1]).pos, m.vertex(q.corners[3]).pos);
  LatticeCoord d = sub(scale(m.vertex(v).pos, 2), s);
  return norm2(d);
}

inline CirclePacking build_packing(const Mesh& m) {
  CirclePacking p;
  p.quarter_r2.resize(m.vertex_capacity());
  p.present.assign(m.vertex_capacity(), false);
  for (VertexId v = 0; v < m.vertex_capacity(); ++v) {
    if (!m.vertex_alive(v) || m.vertex(v).faces.empty()) continue;
    bool first = true;
    SquaredLength qr;
    for (FaceId f : m.vertex(v).faces) {
      SquaredLength r = quarter_r2_in_face(m, f, v);
      if (first) {
        qr = r;
        first = false;
      } else if (r != qr) {
        throw InconsistentRadius("vertex " + m.vertex(v).pos.str() +
                                 " has disagreeing radii across incident faces");
      }
    }
    p.quarter_r2[v] = qr;
    p.present[v] = true;
  }
  return p;
}

struct PackingReport {
  long orthogonal_pairs = 0;
  long tangent_pairs = 0;
  long disjoint_pairs = 0;
  double max_float_mismatch = 0.0;
  std::vector<std::string> violations;

  bool ok() const { return violations.empty(); }
};

namespace detail_packing {

/// r_u + r_v == d, all squared: (4d^2 - qru - qrv)^2 == 4*qru*qrv with a
/// nonnegative middle term.
inline bool tangent(const SquaredLength& qru, const SquaredLength& qrv,
                    const SquaredLength& d2) {
  SquaredLength s = sq_sub(sq_scale(d2, 4), sq_add(qru, qrv));
  if (s.num < 0) return false;
  return sq_mul(s, s) == sq_scale(sq_mul(qru, qrv), 4);
}

/// r_u + r_v < d strictly.
inline bool strictly_disjoint(const SquaredLength& qru, const SquaredLength& qrv,
                              const SquaredLength& d2) {
  SquaredLength s = sq_sub(sq_scale(d2, 4), sq_add(qru, qrv));
  if (s.num <= 0) return false;
  return sq_scale(sq_mul(qru, qrv), 4) < sq_mul(s, s);
}

inline bool ratio_is_exactly_3(const SquaredLength& x, const SquaredLength& y) {
  // x/y == 3 or y/x == 3 on normalized representations.
  return x.num == y.num && (x.pow3 + 1 == y.pow3 || y.pow3 + 1 == x.pow3);
}

inline bool ratio_at_most_9(const SquaredLength& x, const SquaredLength& y) {
  return !(sq_scale(y, 9) < x) && !(sq_scale(x, 9) < y);
}

}  // namespace detail_packing

/// Checks the defining identities of the packing against the mesh:
/// adjacent corners cross at right angles (r_u^2 + r_v^2 = |uv|^2, radius
/// ratio exactly sqrt(3)); opposite corners are tangent (r_u + r_v = |uv|,
/// ratio at most 3). Optionally verifies strict disjointness of all other
/// circle pairs within the 2-ring of each face plus random distant pairs,
/// and that the float mirror of every radius agrees with exact arithmetic.
inline PackingReport validate_packing(const CirclePacking& p, const Mesh& m,
                                      bool check_disjoint = true,
                                      int random_pairs = 256,
                                      std::uint64_t seed = 20240915) {
  PackingReport rep;
  auto fail = [&](const std::string& msg) { rep.violations.push_back(msg); };

  auto opposite_in_common_face = [&](VertexId u, VertexId v) {
    for (FaceId f : m.vertex(u).faces)
      if (m.corner_index(f, v) >= 0 && m.opposite_corner(f, u) == v) return true;
    return false;
  };

  for (FaceId f = 0; f < m.face_capacity(); ++f) {
    if (!m.face_alive(f)) continue;
    const auto& c = m.face(f).corners;
    for (int i = 0; i < 4; ++i) {
      VertexId u = c[i], v = c[(i + 1) % 4];
      SquaredLength d2 = distance2(m.vertex(u).pos, m.vertex(v).pos);
      if (sq_add(p.quarter_r2[u], p.quarter_r2[v]) != sq_scale(d2, 4))
        fail("orthogonality identity fails on an edge of face " + std::to_string(f));
      if (!detail_packing::ratio_is_exactly_3(p.quarter_r2[u], p.quarter_r2[v]))
        fail("adjacent radii ratio is not exactly sqrt(3) on face " + std::to_string(f));
      ++rep.orthogonal_pairs;
    }
    for (int i = 0; i < 2; ++i) {
      VertexId u = c[i], v = c[i + 2];
      SquaredLength d2 = distance2(m.vertex(u).pos, m.vertex(v).pos);
      if (!detail_packing::tangent(p.quarter_r2[u], p.quarter_r2[v], d2))
        fail("tangency identity fails on a diagonal of face " + std::to_string(f));
      if (!detail_packing::ratio_at_most_9(p.quarter_r2[u], p.quarter_r2[v]))
        fail("tangent radii ratio exceeds 3 on face " + std::to_string(f));
      ++rep.tangent_pairs;
    }
    // Float mirror of the diagonal crossing against exact radii.
    auto ps = m.face_positions(f);
    auto x1 = to_cartesian(ps[1]), x3 = to_cartesian(ps[3]);
    std::array<double, 2> cross{(x1[0] + x3[0]) / 2, (x1[1] + x3[1]) / 2};
    for (int i = 0; i < 4; ++i) {
      auto xv = to_cartesian(ps[i]);
      double rf = std::hypot(xv[0] - cross[0], xv[1] - cross[1]);
      double mismatch = std::fabs(rf - p.radius(c[i]));
      rep.max_float_mismatch = std::max(rep.max_float_mismatch, mismatch);
      if (mismatch > 1e-9)
        fail("float radius mirror off by " + std::to_string(mismatch));
    }
  }

  if (check_disjoint) {
    auto check_pair = [&](VertexId u, VertexId v) {
      if (u == v || m.has_edge(u, v) || opposite_in_common_face(u, v)) return;
      SquaredLength d2 = distance2(m.vertex(u).pos, m.vertex(v).pos);
      if (!detail_packing::strictly_disjoint(p.quarter_r2[u], p.quarter_r2[v], d2)) {
        // Two rim vertices may be legitimately tangent or orthogonal when
        // the face that would witness the pair was truncated by the patch
        // boundary; only a genuine overlap is a violation there.
        bool rim_pair = !m.is_interior(u) && !m.is_interior(v);
        bool witnessless_contact =
            detail_packing::tangent(p.quarter_r2[u], p.quarter_r2[v], d2) ||
            sq_add(p.quarter_r2[u], p.quarter_r2[v]) == sq_scale(d2, 4);
        if (!rim_pair || !witnessless_contact)
          fail("circles at " + m.vertex(u).pos.str() + " and " +
               m.vertex(v).pos.str() + " are neither adjacent, tangent, nor disjoint");
      }
      ++rep.disjoint_pairs;
    };
    for (FaceId f = 0; f < m.face_capacity(); ++f) {
      if (!m.face_alive(f)) continue;
      // 2-ring of the face corners.
      std::unordered_set<VertexId> ring(m.face(f).corners.begin(),
                                        m.face(f).corners.end());
      std::vector<VertexId> grow(ring.begin(), ring.end());
      for (int depth = 0; depth < 2; ++depth) {
        std::vector<VertexId> next;
        for (VertexId v : grow)
          for (VertexId u : m.vertex(v).neighbors)
            if (ring.insert(u).second) next.push_back(u);
        grow = std::move(next);
      }
      std::vector<VertexId> vs(ring.begin(), ring.end());
      std::sort(vs.begin(), vs.end());
      for (std::size_t i = 0; i < vs.size(); ++i)
        for (std::size_t j = i + 1; j < vs.size(); ++j) check_pair(vs[i], vs[j]);
    }
    std::mt19937_64 rng(seed);
    std::vector<VertexId> live;
    for (VertexId v = 0; v < m.vertex_capacity(); ++v)
      if (p.present[v]) live.push_back(v);
    if (live.size() >= 2) {
      std::uniform_int_distribution<std::size_t> pick(0, live.size() - 1);
      for (int i = 0; i < random_pairs; ++i) check_pair(live[pick(rng)], live[pick(rng)]);
    }
  }
  return rep;
}

}  // namespace dk
