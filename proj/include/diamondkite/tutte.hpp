#pragma once

#include <unordered_map>
#include <vector>

#include "diamondkite/mesh.hpp"

namespace dk {

struct CentroidReport {
  long interior_checked = 0;
  long boundary_skipped = 0;
  std::vector<VertexId> defects;

  bool ok() const { return defects.empty(); }
};

/// Every interior vertex must be the exact centroid of its neighbors:
/// the lattice sum of (neighbor - vertex) vanishes. Boundary vertices
/// (incomplete fans) are skipped and counted. `overrides` substitutes
/// positions for selected vertices (used by negative-control tests).
inline CentroidReport check_centroid(
    const Mesh& m,
    const std::unordered_map<VertexId, LatticeCoord>* overrides = nullptr) {
  auto pos = [&](VertexId v) -> LatticeCoord {
    if (overrides) {
      auto it = overrides->find(v);
      if (it != overrides->end()) return it->second;
    }
    return m.vertex(v).pos;
  };
  CentroidReport rep;
  for (VertexId v = 0; v < m.vertex_capacity(); ++v) {
    if (!m.vertex_alive(v)) continue;
    if (!m.is_interior(v)) {
      ++rep.boundary_skipped;
      continue;
    }
    LatticeCoord acc = make_coord(0, 0, 0);
    LatticeCoord c = pos(v);
    for (VertexId u : m.vertex(v).neighbors) acc = add(acc, sub(pos(u), c));
    ++rep.interior_checked;
    if (!acc.is_origin()) rep.defects.push_back(v);
  }
  return rep;
}

}  // namespace dk
