#pragma once

#include <array>
#include <vector>

#include "diamondkite/mesh.hpp"

namespace dk {

/// Proper 3-coloring of the faces: two faces share a color exactly when
/// their diagonals are parallel. Diagonal directions are multiples of 30
/// degrees; orientation modulo 90 degrees gives the three classes, and the
/// two diagonals of one face (90 degrees apart) agree on the class.
struct FaceColoring {
  std::vector<signed char> color;  // 0..2 per face id, -1 for dead faces
  std::array<long, 3> class_sizes{0, 0, 0};

  int classes_used() const {
    return int(class_sizes[0] > 0) + int(class_sizes[1] > 0) + int(class_sizes[2] > 0);
  }
};

inline FaceColoring three_color(const Mesh& m) {
  FaceColoring out;
  out.color.assign(m.face_capacity(), -1);
  for (FaceId f = 0; f < m.face_capacity(); ++f) {
    if (!m.face_alive(f)) continue;
    auto p = m.face_positions(f);
    int idx = direction_index(p[0], p[2]);
    if (idx < 0) throw Error("face diagonal off the 30-degree direction grid");
    out.color[f] = static_cast<signed char>(idx % 3);
    ++out.class_sizes[idx % 3];
  }
  // Properness: faces sharing an edge never share a color.
  for (FaceId f = 0; f < m.face_capacity(); ++f) {
    if (!m.face_alive(f)) continue;
    const auto& c = m.face(f).corners;
    for (int i = 0; i < 4; ++i) {
      auto two = m.edge_faces(c[i], c[(i + 1) % 4]);
      if (two[1] != kNoFace && out.color[two[0]] == out.color[two[1]])
        throw Error("adjacent faces received the same color");
    }
  }
  return out;
}

}  // namespace dk
