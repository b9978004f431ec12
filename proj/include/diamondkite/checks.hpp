#pragma once

#include <deque>
#include <string>
#include <vector>

#include "diamondkite/mesh.hpp"

namespace dk {

/// 2-coloring of the vertex-edge graph (0/1 per vertex id, -1 for dead).
/// Every diamond-kite mesh is bipartite; an empty result means an odd cycle
/// was found, which would be a kernel bug.
inline std::vector<signed char> vertex_bipartition(const Mesh& m) {
  std::vector<signed char> color(m.vertex_capacity(), -1);
  for (VertexId s = 0; s < m.vertex_capacity(); ++s) {
    if (!m.vertex_alive(s) || color[s] != -1) continue;
    color[s] = 0;
    std::deque<VertexId> bfs{s};
    while (!bfs.empty()) {
      VertexId v = bfs.front();
      bfs.pop_front();
      for (VertexId u : m.vertex(v).neighbors) {
        if (color[u] == -1) {
          color[u] = static_cast<signed char>(1 - color[v]);
          bfs.push_back(u);
        } else if (color[u] == color[v]) {
          return {};
        }
      }
    }
  }
  return color;
}

/// Both diagonals of every face cross at right angles (exact test).
inline std::vector<std::string> check_orthodiagonal(const Mesh& m) {
  std::vector<std::string> bad;
  for (FaceId f = 0; f < m.face_capacity(); ++f) {
    if (!m.face_alive(f)) continue;
    auto p = m.face_positions(f);
    if (!orthogonal(p[0], p[2], p[1], p[3]))
      bad.push_back("face " + std::to_string(f) + " diagonals not orthogonal");
  }
  return bad;
}

/// Shape exactness for every face plus edge/Euler/lower-set consistency.
inline std::vector<std::string> check_structure(const Mesh& m) {
  std::vector<std::string> bad = m.validate();
  if (vertex_bipartition(m).empty()) bad.push_back("vertex graph is not bipartite");
  auto ortho = check_orthodiagonal(m);
  bad.insert(bad.end(), ortho.begin(), ortho.end());
  return bad;
}

}  // namespace dk
