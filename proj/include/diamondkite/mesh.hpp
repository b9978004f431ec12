#pragma once

#include <algorithm>
#include <array>
#include <cassert>
#include <cstdint>
#include <cstdlib>
#include <optional>
#include <sstream>
#include <string>
#include <unordered_map>
#include <vector>

#include "diamondkite/errors.hpp"
#include "diamondkite/lattice.hpp"
#include "diamondkite/replacement.hpp"

namespace dk {

using VertexId = std::int32_t;
using FaceId = std::int32_t;
constexpr VertexId kNoVertex = -1;
constexpr FaceId kNoFace = -1;

enum class Shape : std::uint8_t { Diamond, Kite };

inline const char* shape_name(Shape s) {
  return s == Shape::Diamond ? "diamond" : "kite";
}

struct Vertex {
  LatticeCoord pos;
  std::vector<VertexId> neighbors;  // unordered; use Mesh::ccw_neighbors
  std::vector<FaceId> faces;        // unordered; use Mesh::face_in_wedge
  bool alive = true;
};

/// Diamonds (60/120 rhombi) store corners counterclockwise from the
/// lexicographically smaller acute corner; kites (60/90/120/90) from the
/// 60-degree corner. Level l means longest side 3^(-l/2).
struct QuadFace {
  std::array<VertexId, 4> corners;
  Shape shape = Shape::Diamond;
  std::int16_t level = 0;
  bool alive = true;
};

struct FaceClass {
  Shape shape;
  int level;
  int start;  // rotation offset into the input corner array
};

/// Exact classification of four ccw corner positions as a diamond or kite.
/// Returns nullopt if the quad is neither (which would indicate a kernel
/// bug; every face of a diamond-kite mesh is one of the two).
inline std::optional<FaceClass> classify_face(const std::array<LatticeCoord, 4>& p) {
  {
    auto [u, v] = detail::aligned_pair(sub(p[1], p[0]), sub(p[3], p[0]));
    if (detail::cross_sign(u, v) <= 0) return std::nullopt;  // not ccw
  }
  std::array<SquaredLength, 4> side;
  for (int i = 0; i < 4; ++i) {
    side[i] = distance2(p[i], p[(i + 1) % 4]);
    if (side[i].num == 0) return std::nullopt;
  }
  std::array<int, 4> ang;
  for (int i = 0; i < 4; ++i) {
    ang[i] = corner_angle(p[i], p[(i + 3) % 4], p[(i + 1) % 4]);
    if (ang[i] == 0) return std::nullopt;
  }
  if (side[0] == side[1] && side[1] == side[2] && side[2] == side[3]) {
    if (side[0].num != 1 || side[0].pow3 < 0) return std::nullopt;
    int acute = ang[0] == 60 ? 0 : 1;
    for (int i = 0; i < 4; ++i)
      if (ang[i] != (i % 2 == acute % 2 ? 60 : 120)) return std::nullopt;
    int start = acute;
    if (p[(acute + 2) % 4] < p[acute]) start = (acute + 2) % 4;
    return FaceClass{Shape::Diamond, side[0].pow3, start};
  }
  // Kite: locate the unique 60-degree corner, flanked by the two long sides.
  for (int s = 0; s < 4; ++s) {
    if (ang[s] != 60) continue;
    const SquaredLength& lng = side[s];
    if (lng.num != 1 || lng.pow3 < 0) return std::nullopt;
    SquaredLength shrt = side2_of_level(lng.pow3 + 1);
    if (side[(s + 3) % 4] != lng) return std::nullopt;
    if (side[(s + 1) % 4] != shrt || side[(s + 2) % 4] != shrt) return std::nullopt;
    if (ang[(s + 1) % 4] != 90 || ang[(s + 3) % 4] != 90) return std::nullopt;
    if (ang[(s + 2) % 4] != 120) return std::nullopt;
    return FaceClass{Shape::Kite, lng.pow3, s};
  }
  return std::nullopt;
}

/// One executed replacement or coarsening step.
struct StepDelta {
  ReplacementKey key;
  std::vector<FaceId> added;
  std::vector<FaceId> removed;
};

/// Explicit diamond-kite mesh over a finite rhombille patch. Mutating
/// operations require exclusive access; read-only analysis may run
/// concurrently between mutations.
class Mesh {
 public:
  /// Rhombille patch: three level-0 diamonds for each of the
  /// 3*radius^2 + 3*radius + 1 hexagon centers within `radius` steps of the
  /// origin in the center lattice. Each diamond is owned by the acute-corner
  /// center from which it spans an upward sector, so the rim is irregular by
  /// one face ring; centers within radius-1 steps always have complete fans.
  static Mesh initial_patch(int radius) {
    if (radius < 1) throw PreconditionViolation("patch radius must be >= 1");
    Mesh m;
    m.radius_ = radius;
    LatticeCoord unit[6];
    for (int i = 0; i < 6; ++i) unit[i] = mul_unit(make_coord(1, 0, 0), i);
    for (Int u = -radius; u <= radius; ++u) {
      for (Int v = -radius; v <= radius; ++v) {
        Int d = (std::llabs(u) + std::llabs(v) + std::llabs(u + v)) / 2;
        if (d > radius) continue;
        LatticeCoord t = make_coord(u - v, u + 2 * v, 0);
        for (int i = 0; i < 3; ++i) {
          std::array<LatticeCoord, 4> ps = {
              t, add(t, unit[i]), add(t, add(unit[i], unit[i + 1])),
              add(t, unit[i + 1])};
          std::array<VertexId, 4> ids;
          for (int c = 0; c < 4; ++c) ids[c] = m.ensure_vertex(ps[c]);
          m.add_face(ids);
        }
      }
    }
    m.euler_ = m.vertex_count() - m.edge_count() + m.face_count();
    m.hexagon_count_ = 3 * radius * radius + 3 * radius + 1;
    return m;
  }

  /// Rebuilds the mesh identified by a lower set: initial patch plus the
  /// keys in canonical (hence prerequisite-respecting) order.
  static Mesh replay(int radius, const LowerSet& steps) {
    if (!steps.is_downward_closed())
      throw PreconditionViolation("replay requires a downward-closed key set");
    Mesh m = initial_patch(radius);
    for (const auto& key : linearize(steps)) m.apply_replacement(key);
    return m;
  }

  int patch_radius() const { return radius_; }
  int hexagon_count() const { return hexagon_count_; }
  const LowerSet& applied() const { return applied_; }
  int vertex_count() const { return live_vertices_; }
  int edge_count() const { return int(edges_.size()); }
  int face_count() const { return live_faces_; }
  int euler_characteristic() const { return euler_; }

  VertexId vertex_capacity() const { return VertexId(vertices_.size()); }
  FaceId face_capacity() const { return FaceId(faces_.size()); }
  bool vertex_alive(VertexId v) const { return vertices_[v].alive; }
  bool face_alive(FaceId f) const { return f >= 0 && f < face_capacity() && faces_[f].alive; }
  const Vertex& vertex(VertexId v) const { return vertices_[v]; }
  const QuadFace& face(FaceId f) const { return faces_[f]; }

  VertexId find_vertex(const LatticeCoord& pos) const {
    auto it = pos_index_.find(pos);
    return it == pos_index_.end() ? kNoVertex : it->second;
  }

  std::array<LatticeCoord, 4> face_positions(FaceId f) const {
    const QuadFace& q = faces_[f];
    return {vertices_[q.corners[0]].pos, vertices_[q.corners[1]].pos,
            vertices_[q.corners[2]].pos, vertices_[q.corners[3]].pos};
  }

  int corner_index(FaceId f, VertexId v) const {
    const auto& c = faces_[f].corners;
    for (int i = 0; i < 4; ++i)
      if (c[i] == v) return i;
    return -1;
  }

  /// Exact interior angle (60/90/120) of face f at vertex v.
  int angle_at(FaceId f, VertexId v) const {
    int i = corner_index(f, v);
    assert(i >= 0);
    const auto& c = faces_[f].corners;
    return corner_angle(vertices_[c[i]].pos, vertices_[c[(i + 3) % 4]].pos,
                        vertices_[c[(i + 1) % 4]].pos);
  }

  VertexId opposite_corner(FaceId f, VertexId v) const {
    int i = corner_index(f, v);
    assert(i >= 0);
    return faces_[f].corners[(i + 2) % 4];
  }

  /// Neighbors of v sorted counterclockwise by exact direction.
  std::vector<VertexId> ccw_neighbors(VertexId v) const {
    std::vector<VertexId> out = vertices_[v].neighbors;
    const LatticeCoord& c = vertices_[v].pos;
    std::sort(out.begin(), out.end(), [&](VertexId x, VertexId y) {
      return ccw_less(c, vertices_[x].pos, vertices_[y].pos);
    });
    return out;
  }

  /// The face incident to both edge (v,x) and edge (v,y): the wedge face.
  FaceId face_in_wedge(VertexId v, VertexId x, VertexId y) const {
    for (FaceId f : vertices_[v].faces) {
      const auto& c = faces_[f].corners;
      bool hx = false, hy = false;
      for (int i = 0; i < 4; ++i) {
        hx |= c[i] == x;
        hy |= c[i] == y;
      }
      if (hx && hy) return f;
    }
    return kNoFace;
  }

  /// Visits every live edge as (u, v, incident face count). Iteration order
  /// follows the hash map; reduce to order-independent aggregates only.
  template <class F>
  void for_each_edge(F&& fn) const {
    for (const auto& [key, ef] : edges_)
      fn(VertexId(key >> 32), VertexId(key & 0xffffffff), ef.n);
  }

  /// The two faces bordering edge (u,v); second is kNoFace on the boundary.
  std::array<FaceId, 2> edge_faces(VertexId u, VertexId v) const {
    auto it = edges_.find(edge_key(u, v));
    if (it == edges_.end()) return {kNoFace, kNoFace};
    return {it->second.f[0], it->second.n > 1 ? it->second.f[1] : kNoFace};
  }

  bool has_edge(VertexId u, VertexId v) const {
    return edges_.count(edge_key(u, v)) != 0;
  }

  /// True iff the incident faces of v close up into a full cyclic fan.
  bool is_interior(VertexId v) const {
    const Vertex& vx = vertices_[v];
    if (!vx.alive || vx.neighbors.empty()) return false;
    if (vx.faces.size() != vx.neighbors.size()) return false;
    auto nb = ccw_neighbors(v);
    for (std::size_t i = 0; i < nb.size(); ++i)
      if (face_in_wedge(v, nb[i], nb[(i + 1) % nb.size()]) == kNoFace) return false;
    return true;
  }

  // Mutations ----------------------------------------------------------------

  /// Performs the replacement step `key`: the six edges of length
  /// 3^(-level/2) meeting at the center are replaced by six finer diamonds,
  /// and the six surrounding quads are rebuilt across the hexagon boundary.
  /// dV,dE,dF = +6,+12,+6.
  StepDelta apply_replacement(const ReplacementKey& key) {
    require_valid_key(key);
    // When the six-edge precondition fails although every prerequisite has
    // been performed, the only possible cause is the finite patch.
    auto fail_six_edges = [&](const std::string& what) -> void {
      if (applied_.contains(key))
        throw PreconditionViolation("replacement " + key.str() +
                                    " has already been performed");
      for (const auto& p : prerequisites(key))
        if (!applied_.contains(p))
          throw PreconditionViolation("replacement " + key.str() + " " + what +
                                      "; prerequisite " + p.str() + " not performed");
      throw BoundaryViolation("replacement " + key.str() + " " + what +
                              "; hexagon truncated by the patch boundary");
    };
    VertexId vid = find_vertex(key.center);
    if (vid == kNoVertex || !vertices_[vid].alive)
      fail_six_edges("center is not a mesh vertex");
    const LatticeCoord center = vertices_[vid].pos;
    SquaredLength want = side2_of_level(key.level);
    if (vertices_[vid].neighbors.size() != 6)
      fail_six_edges("needs six edges, found " +
                     std::to_string(vertices_[vid].neighbors.size()));
    for (VertexId w : vertices_[vid].neighbors)
      if (distance2(center, vertices_[w].pos) != want)
        fail_six_edges("needs six edges of squared length 3^-" +
                       std::to_string(key.level));
    std::vector<VertexId> w = ccw_neighbors(vid);
    std::array<FaceId, 6> old_face;
    for (int i = 0; i < 6; ++i) {
      old_face[i] = face_in_wedge(vid, w[i], w[(i + 1) % 6]);
      if (old_face[i] == kNoFace)
        throw BoundaryViolation("hexagon of " + key.str() +
                                " is not fully interior to the patch");
    }

    StepDelta delta;
    delta.key = key;
    std::array<std::array<VertexId, 4>, 6> old_corners;
    for (int i = 0; i < 6; ++i) old_corners[i] = faces_[old_face[i]].corners;

    for (int i = 0; i < 6; ++i) {
      remove_face(old_face[i]);
      delta.removed.push_back(old_face[i]);
    }
    std::array<VertexId, 6> dlt;
    for (int i = 0; i < 6; ++i) {
      LatticeCoord p = centroid3(center, vertices_[w[i]].pos, vertices_[w[(i + 1) % 6]].pos);
      dlt[i] = ensure_vertex(p);
    }
    // Straddling quads: the old quad with the center corner pulled in to the
    // new fine vertex. Kite against an unreplaced neighbor hexagon, diamond
    // against a replaced one; classification decides.
    for (int i = 0; i < 6; ++i) {
      std::array<VertexId, 4> c = old_corners[i];
      for (auto& id : c)
        if (id == vid) id = dlt[i];
      delta.added.push_back(add_face(c));
    }
    // Six new diamonds, one level finer, filling the hexagon interior.
    for (int i = 0; i < 6; ++i) {
      int h = (i + 5) % 6;
      delta.added.push_back(add_face({vid, dlt[h], w[i], dlt[i]}));
    }
    applied_.insert(key);
    for (FaceId f : delta.added) created_log_.push_back(f);
    assert(vertex_count() - edge_count() + face_count() == euler_);
    return delta;
  }

  /// True iff v is surrounded by six equal-level diamonds whose creating
  /// replacement is on record, i.e. the reverse replacement applies.
  bool is_coarsenable_topology(VertexId v) const {
    const Vertex& vx = vertices_[v];
    if (!vx.alive || vx.faces.size() != 6 || vx.neighbors.size() != 6) return false;
    int level = -1;
    for (FaceId f : vx.faces) {
      const QuadFace& q = faces_[f];
      if (q.shape != Shape::Diamond) return false;
      if (level == -1) level = q.level;
      if (q.level != level) return false;
    }
    if (level < 1) return false;
    ReplacementKey key{vx.pos, level - 1};
    return applied_.contains(key);
  }

  /// Exact inverse of apply_replacement for the key (v, level-1).
  /// dV,dE,dF = -6,-12,-6.
  StepDelta coarsen_step(VertexId vid) {
    if (!is_coarsenable_topology(vid))
      throw PreconditionViolation("vertex is not coarsenable");
    const Vertex& v = vertices_[vid];
    int level = faces_[v.faces.front()].level;
    ReplacementKey key{v.pos, level - 1};

    std::vector<VertexId> dlt = ccw_neighbors(vid);  // the six fine vertices
    StepDelta delta;
    delta.key = key;
    // Around each fine vertex: two of the six diamonds plus one straddling
    // quad. The straddle gets its fine corner pushed back out to the center.
    std::array<FaceId, 6> straddle;
    std::array<std::array<VertexId, 4>, 6> new_corners;
    for (int i = 0; i < 6; ++i) {
      const Vertex& d = vertices_[dlt[i]];
      if (d.faces.size() != 3)
        throw PreconditionViolation("fine vertex has been refined further");
      FaceId s = kNoFace;
      for (FaceId f : d.faces) {
        if (corner_index(f, vid) == -1) {
          s = f;
          break;
        }
      }
      assert(s != kNoFace);
      straddle[i] = s;
      new_corners[i] = faces_[s].corners;
      for (auto& id : new_corners[i])
        if (id == dlt[i]) id = vid;
    }
    std::vector<FaceId> hex_faces = v.faces;
    for (FaceId f : hex_faces) {
      remove_face(f);
      delta.removed.push_back(f);
    }
    for (int i = 0; i < 6; ++i) {
      remove_face(straddle[i]);
      delta.removed.push_back(straddle[i]);
    }
    for (int i = 0; i < 6; ++i) delta.added.push_back(add_face(new_corners[i]));
    for (VertexId d : dlt) prune_if_isolated(d);
    applied_.erase(key);
    for (FaceId f : delta.added) created_log_.push_back(f);
    assert(vertex_count() - edge_count() + face_count() == euler_);
    return delta;
  }

  /// Recursive local refinement at a vertex that is the 60-degree corner of
  /// at least one face: performs the not-yet-applied prerequisites of the
  /// implied replacement, then the replacement itself. Returns the number of
  /// replacement steps performed.
  int refine(VertexId vid) {
    if (!vertices_[vid].alive) throw PreconditionViolation("refine: dead vertex");
    const LatticeCoord center = vertices_[vid].pos;
    int level = -1;
    for (FaceId f : vertices_[vid].faces) {
      if (angle_at(f, vid) == 60) {
        int l = faces_[f].level;
        assert(level == -1 || level == l);
        level = l;
      }
    }
    if (level == -1)
      throw PreconditionViolation("refine requires a 60-degree corner at " +
                                  center.str());
    if (level + 1 > kMaxLevel)
      throw NonTermination("refinement beyond level cap " + std::to_string(kMaxLevel));
    int steps = 0;
    // Each kite with a 90-degree angle here marks a missing prerequisite;
    // its 60-degree corner is the coarser center to replace first.
    std::vector<std::pair<FaceId, VertexId>> pending;
    for (FaceId f : vertices_[vid].faces)
      if (faces_[f].shape == Shape::Kite && angle_at(f, vid) == 90)
        pending.emplace_back(f, faces_[f].corners[0]);
    for (auto [f, q] : pending) {
      if (!faces_[f].alive) continue;  // an earlier recursion rebuilt it
      steps += refine(q);
    }
    apply_replacement(ReplacementKey{center, level});
    return steps + 1;
  }

  /// Drains the log of faces created since the last call. Adaptation uses
  /// this to enqueue freshly created faces.
  std::vector<FaceId> take_created_log() {
    std::vector<FaceId> out;
    out.swap(created_log_);
    return out;
  }
  void clear_created_log() { created_log_.clear(); }

  /// Canonical structural digest: equal strings iff equal meshes (vertex
  /// position sets and face corner lists, independent of construction
  /// order).
  std::string fingerprint() const {
    std::vector<std::string> vs;
    vs.reserve(live_vertices_);
    for (const auto& v : vertices_)
      if (v.alive) vs.push_back(v.pos.str());
    std::sort(vs.begin(), vs.end());
    std::vector<std::string> fs;
    fs.reserve(live_faces_);
    for (const auto& f : faces_) {
      if (!f.alive) continue;
      std::string r = shape_name(f.shape);
      r += "/" + std::to_string(f.level);
      for (VertexId c : f.corners) r += vertices_[c].pos.str();
      fs.push_back(r);
    }
    std::sort(fs.begin(), fs.end());
    std::ostringstream out;
    out << "patch " << radius_ << "\n";
    for (const auto& s : vs) out << s << "\n";
    for (const auto& s : fs) out << s << "\n";
    return out.str();
  }

  /// Re-derives every face's classification and checks structural
  /// consistency; returns human-readable violations (empty = valid).
  std::vector<std::string> validate() const {
    std::vector<std::string> bad;
    for (FaceId f = 0; f < face_capacity(); ++f) {
      if (!faces_[f].alive) continue;
      auto cls = classify_face(face_positions(f));
      if (!cls) {
        bad.push_back("face " + std::to_string(f) + " is not an exact diamond/kite");
        continue;
      }
      if (cls->shape != faces_[f].shape || cls->level != faces_[f].level || cls->start != 0)
        bad.push_back("face " + std::to_string(f) + " mislabeled");
    }
    for (const auto& [k, ef] : edges_) {
      if (ef.n < 1 || ef.n > 2) bad.push_back("edge with " + std::to_string(ef.n) + " faces");
      (void)k;
    }
    for (VertexId v = 0; v < vertex_capacity(); ++v) {
      if (!vertices_[v].alive || !is_interior(v)) continue;
      std::size_t deg = vertices_[v].neighbors.size();
      if (deg < 3 || deg > 6)
        bad.push_back("interior vertex of degree " + std::to_string(deg));
    }
    if (vertex_count() - edge_count() + face_count() != euler_)
      bad.push_back("Euler characteristic drifted");
    if (!applied_.is_downward_closed())
      bad.push_back("applied set is not downward closed");
    return bad;
  }

 private:
  Mesh() = default;

  static std::uint64_t edge_key(VertexId u, VertexId v) {
    if (u > v) std::swap(u, v);
    return (std::uint64_t(std::uint32_t(u)) << 32) | std::uint32_t(v);
  }

  VertexId ensure_vertex(const LatticeCoord& pos) {
    auto it = pos_index_.find(pos);
    if (it != pos_index_.end()) {
      assert(vertices_[it->second].alive);
      return it->second;
    }
    VertexId id = VertexId(vertices_.size());
    vertices_.push_back(Vertex{pos, {}, {}, true});
    pos_index_.emplace(pos, id);
    ++live_vertices_;
    return id;
  }

  FaceId add_face(const std::array<VertexId, 4>& ccw) {
    std::array<LatticeCoord, 4> ps;
    for (int i = 0; i < 4; ++i) ps[i] = vertices_[ccw[i]].pos;
    auto cls = classify_face(ps);
    if (!cls)
      throw Error("attempted to create a face that is not an exact diamond/kite");
    QuadFace q;
    q.shape = cls->shape;
    q.level = std::int16_t(cls->level);
    for (int i = 0; i < 4; ++i) q.corners[i] = ccw[(cls->start + i) % 4];
    FaceId id = FaceId(faces_.size());
    faces_.push_back(q);
    ++live_faces_;
    for (int i = 0; i < 4; ++i) {
      vertices_[q.corners[i]].faces.push_back(id);
      link_edge(q.corners[i], q.corners[(i + 1) % 4], id);
    }
    return id;
  }

  void remove_face(FaceId id) {
    QuadFace& q = faces_[id];
    assert(q.alive);
    for (int i = 0; i < 4; ++i) {
      auto& fl = vertices_[q.corners[i]].faces;
      fl.erase(std::find(fl.begin(), fl.end(), id));
      unlink_edge(q.corners[i], q.corners[(i + 1) % 4], id);
    }
    q.alive = false;
    --live_faces_;
  }

  void link_edge(VertexId u, VertexId v, FaceId f) {
    auto& ef = edges_[edge_key(u, v)];
    if (ef.n == 0) {
      vertices_[u].neighbors.push_back(v);
      vertices_[v].neighbors.push_back(u);
    }
    assert(ef.n < 2);
    ef.f[ef.n++] = f;
  }

  void unlink_edge(VertexId u, VertexId v, FaceId f) {
    auto it = edges_.find(edge_key(u, v));
    assert(it != edges_.end());
    auto& ef = it->second;
    if (ef.n == 2 && ef.f[0] == f) std::swap(ef.f[0], ef.f[1]);
    assert(ef.f[ef.n - 1] == f);
    --ef.n;
    if (ef.n == 0) {
      auto& nu = vertices_[u].neighbors;
      auto& nv = vertices_[v].neighbors;
      nu.erase(std::find(nu.begin(), nu.end(), v));
      nv.erase(std::find(nv.begin(), nv.end(), u));
      edges_.erase(it);
    }
  }

  void prune_if_isolated(VertexId v) {
    Vertex& vx = vertices_[v];
    if (!vx.alive || !vx.faces.empty() || !vx.neighbors.empty()) return;
    vx.alive = false;
    pos_index_.erase(vx.pos);
    --live_vertices_;
  }

  struct EdgeFaces {
    FaceId f[2] = {kNoFace, kNoFace};
    int n = 0;
  };

  int radius_ = 0;
  int hexagon_count_ = 0;
  int euler_ = 0;
  int live_vertices_ = 0;
  int live_faces_ = 0;
  std::vector<Vertex> vertices_;
  std::vector<QuadFace> faces_;
  std::unordered_map<std::uint64_t, EdgeFaces> edges_;
  std::unordered_map<LatticeCoord, VertexId> pos_index_;
  LowerSet applied_;
  std::vector<FaceId> created_log_;
};

}  // namespace dk
