#pragma once

#include <array>
#include <string>
#include <vector>

#include "diamondkite/checks.hpp"
#include "diamondkite/mesh.hpp"

namespace dk {

/// The four polygon shapes that occur in the dual meshes.
enum class DualShape { Triangle, Trapezoid, Pentagon, Hexagon };

inline const char* dual_shape_name(DualShape s) {
  switch (s) {
    case DualShape::Triangle: return "triangle";
    case DualShape::Trapezoid: return "trapezoid";
    case DualShape::Pentagon: return "pentagon";
    case DualShape::Hexagon: return "hexagon";
  }
  return "?";
}

struct DualFace {
  VertexId center;               // the primal vertex this face surrounds
  std::vector<VertexId> cycle;   // ccw polygon corners (primal vertex ids)
  DualShape shape;
};

/// The face diagonals split by the vertex bipartition into two meshes; each
/// vertex of one class is surrounded by a cycle of the other class.
struct DualMeshPair {
  std::vector<signed char> vertex_class;               // 0/1, -1 dead
  std::array<std::vector<std::array<VertexId, 2>>, 2> edges;
  std::array<std::vector<DualFace>, 2> faces;
  long dropped_boundary_cells = 0;
};

namespace detail_duals {

/// Classifies the cycle around an interior vertex into the four dual
/// shapes, verifying side and angle patterns exactly. Throws on anything
/// else.
inline DualShape classify_cycle(const Mesh& m, const std::vector<VertexId>& cyc) {
  int n = int(cyc.size());
  std::vector<LatticeCoord> p(n);
  for (int i = 0; i < n; ++i) p[i] = m.vertex(cyc[i]).pos;
  std::vector<SquaredLength> s(n);
  for (int i = 0; i < n; ++i) s[i] = distance2(p[i], p[(i + 1) % n]);
  std::vector<int> ang(n);
  for (int i = 0; i < n; ++i)
    ang[i] = corner_angle(p[i], p[(i + n - 1) % n], p[(i + 1) % n]);

  auto all_sides_equal = [&] {
    for (int i = 1; i < n; ++i)
      if (s[i] != s[0]) return false;
    return true;
  };
  if (n == 3) {
    if (all_sides_equal() && ang[0] == 60 && ang[1] == 60 && ang[2] == 60)
      return DualShape::Triangle;
  } else if (n == 6) {
    bool good = all_sides_equal();
    for (int i = 0; i < 6; ++i) good = good && ang[i] == 120;
    if (good) return DualShape::Hexagon;
  } else if (n == 4) {
    // Isosceles trapezoid, sides proportional to (1, 2, 3, 2) from the
    // short base; its two corners have the 120-degree angles.
    for (int r = 0; r < 4; ++r) {
      const SquaredLength& u = s[r];
      if (s[(r + 1) % 4] == sq_scale(u, 4) && s[(r + 2) % 4] == sq_scale(u, 9) &&
          s[(r + 3) % 4] == sq_scale(u, 4) && ang[r] == 120 && ang[(r + 1) % 4] == 120 &&
          ang[(r + 2) % 4] == 60 && ang[(r + 3) % 4] == 60)
        return DualShape::Trapezoid;
    }
  } else if (n == 5) {
    // Equilateral triangle glued to a hexagon: sides (2, 2, 1, 1, 1) from
    // the 60-degree apex, angles (60, 120, 120, 120, 120).
    for (int r = 0; r < 5; ++r) {
      auto sd = [&](int i) { return s[(r + i) % 5]; };
      auto an = [&](int i) { return ang[(r + i) % 5]; };
      const SquaredLength& u = sd(2);
      if (sd(0) == sq_scale(u, 4) && sd(1) == sq_scale(u, 4) && sd(3) == u &&
          sd(4) == u && an(1) == 60 && an(0) == 120 && an(2) == 120 && an(3) == 120 &&
          an(4) == 120)
        return DualShape::Pentagon;
    }
  }
  throw Error("dual cell around a degree-" + std::to_string(n) +
              " vertex matches none of the four admissible shapes");
}

/// Strict point-in-convex-polygon, exact arithmetic, ccw cycle.
inline bool strictly_inside(const Mesh& m, VertexId v,
                            const std::vector<VertexId>& cyc) {
  const LatticeCoord c = m.vertex(v).pos;
  int n = int(cyc.size());
  for (int i = 0; i < n; ++i) {
    const LatticeCoord& a = m.vertex(cyc[i]).pos;
    const LatticeCoord& b = m.vertex(cyc[(i + 1) % n]).pos;
    // cross(b - a, c - a) must be strictly positive for every edge.
    auto [u, w] = detail::aligned_pair(sub(b, a), sub(c, a));
    if (detail::cross_sign(u, w) <= 0) return false;
  }
  return true;
}

}  // namespace detail_duals

/// Builds the two dual well-centered meshes. Interior vertices yield dual
/// faces (the cycle of their neighbors, joined by quad diagonals); boundary
/// cells without a full cycle are dropped and counted. Verifies the shape
/// inventory, the strict interiority of each center, and the orthogonal
/// primal/dual diagonal crossing per quad.
inline DualMeshPair dual_meshes(const Mesh& m) {
  DualMeshPair out;
  out.vertex_class = vertex_bipartition(m);
  if (out.vertex_class.empty()) throw Error("mesh vertex graph is not bipartite");

  for (FaceId f = 0; f < m.face_capacity(); ++f) {
    if (!m.face_alive(f)) continue;
    const auto& c = m.face(f).corners;
    int cls02 = out.vertex_class[c[0]];
    if (cls02 != out.vertex_class[c[2]] ||
        out.vertex_class[c[1]] != out.vertex_class[c[3]] ||
        cls02 == out.vertex_class[c[1]])
      throw Error("quad diagonals do not join equal bipartition classes");
    auto p = m.face_positions(f);
    if (!orthogonal(p[0], p[2], p[1], p[3]))
      throw Error("primal/dual diagonal pair does not cross at right angles");
    out.edges[cls02].push_back({c[0], c[2]});
    out.edges[out.vertex_class[c[1]]].push_back({c[1], c[3]});
  }

  for (VertexId v = 0; v < m.vertex_capacity(); ++v) {
    if (!m.vertex_alive(v)) continue;
    if (!m.is_interior(v)) {
      ++out.dropped_boundary_cells;
      continue;
    }
    std::vector<VertexId> cyc = m.ccw_neighbors(v);
    int vcls = out.vertex_class[v];
    for (VertexId u : cyc)
      if (out.vertex_class[u] == vcls)
        throw Error("dual cycle corner in the same bipartition class as its center");
    if (!detail_duals::strictly_inside(m, v, cyc))
      throw Error("vertex not strictly inside its dual face");
    DualFace df;
    df.center = v;
    df.cycle = std::move(cyc);
    df.shape = detail_duals::classify_cycle(m, df.cycle);
    // The cycle around a class-0 vertex is a face of the class-1 mesh.
    out.faces[1 - vcls].push_back(std::move(df));
  }
  return out;
}

}  // namespace dk
