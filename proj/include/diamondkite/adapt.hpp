#pragma once

#include <array>
#include <chrono>
#include <deque>
#include <limits>
#include <vector>

#include "diamondkite/mesh.hpp"
#include "diamondkite/size_field.hpp"

namespace dk {

enum class QueueOrder { Fifo, Lifo };

/// What to do when a needed replacement reaches outside the finite patch:
/// Strict throws BoundaryViolation; Clamp skips the step and reports it,
/// leaving the offending rim faces unrefined.
enum class BoundaryMode { Strict, Clamp };

struct AdaptOptions {
  QueueOrder order = QueueOrder::Fifo;
  BoundaryMode boundary = BoundaryMode::Strict;
  /// Test sigma at polygon corners only instead of the exact minimum.
  bool vertex_sampling = false;
};

struct AdaptReport {
  long refine_steps = 0;
  long coarsen_steps = 0;
  long skipped_boundary = 0;
  long queue_pushes = 0;
  double wall_ms = 0.0;
};

/// 3^(-level/2) as a float; negative levels give the coarser sizes.
inline double side_length_of_level(int level) {
  const double r = 1.7320508075688772;
  double s = 1.0;
  for (int i = 0; i < level; ++i) s /= r;
  for (int i = 0; i > level; --i) s *= r;
  return s;
}

namespace detail_adapt {

inline std::vector<Point> face_polygon(const Mesh& m, FaceId f) {
  auto p = m.face_positions(f);
  return {to_cartesian(p[0]), to_cartesian(p[1]), to_cartesian(p[2]),
          to_cartesian(p[3])};
}

inline bool oversized(const SizeField& field, const std::vector<Point>& poly,
                      double side, bool vertex_sampling) {
  if (vertex_sampling) {
    double mn = std::numeric_limits<double>::infinity();
    for (const auto& p : poly) mn = std::min(mn, field.eval(p));
    return mn < side;
  }
  return field.min_over_polygon(poly) < side;
}

/// q + (p - q) / 3: the fine vertex a replacement at q's side would create
/// on the segment toward p. Exact (1/3 = z / (1+z)^2 in the ring).
inline LatticeCoord third_point(const LatticeCoord& q, const LatticeCoord& p) {
  return div3(add(scale(q, 2), p));
}

}  // namespace detail_adapt

/// True iff a face of this level may still be split under the level cap.
inline void guard_level_cap(int level) {
  if (level + 1 > kMaxLevel)
    throw NonTermination("size field demands elements beyond level cap " +
                         std::to_string(kMaxLevel));
}

/// Refines until no face is oversized: kites refine at their 60-degree
/// corner; a diamond is tested through the two contained kites that share
/// its maximum side length (their union covers it), refining at the
/// opposite acute corner of whichever is oversized. Newly created faces are
/// re-enqueued. The result is the coarsest mesh consistent with the field.
inline AdaptReport refine_to_size(Mesh& m, const SizeField& field,
                                  const AdaptOptions& opts = {}) {
  auto t0 = std::chrono::steady_clock::now();
  AdaptReport rep;
  std::deque<FaceId> queue;
  for (FaceId f = 0; f < m.face_capacity(); ++f)
    if (m.face_alive(f)) {
      queue.push_back(f);
      ++rep.queue_pushes;
    }
  m.clear_created_log();
  auto do_refine = [&](VertexId p) {
    try {
      rep.refine_steps += m.refine(p);
    } catch (const BoundaryViolation&) {
      if (opts.boundary == BoundaryMode::Strict) throw;
      ++rep.skipped_boundary;
    }
    for (FaceId nf : m.take_created_log()) {
      queue.push_back(nf);
      ++rep.queue_pushes;
    }
  };
  while (!queue.empty()) {
    FaceId f;
    if (opts.order == QueueOrder::Fifo) {
      f = queue.front();
      queue.pop_front();
    } else {
      f = queue.back();
      queue.pop_back();
    }
    if (!m.face_alive(f)) continue;
    const int level = m.face(f).level;
    const double side = side_length_of_level(level);
    if (m.face(f).shape == Shape::Kite) {
      if (detail_adapt::oversized(field, detail_adapt::face_polygon(m, f), side,
                                  opts.vertex_sampling)) {
        guard_level_cap(level);
        do_refine(m.face(f).corners[0]);
      }
    } else {
      const auto c = m.face(f).corners;
      auto p = m.face_positions(f);
      LatticeCoord fine_a = detail_adapt::third_point(p[0], p[2]);
      LatticeCoord fine_c = detail_adapt::third_point(p[2], p[0]);
      std::vector<Point> kite1 = {to_cartesian(fine_a), to_cartesian(p[1]),
                                  to_cartesian(p[2]), to_cartesian(p[3])};
      if (detail_adapt::oversized(field, kite1, side, opts.vertex_sampling)) {
        guard_level_cap(level);
        do_refine(c[2]);
      }
      if (m.face_alive(f)) {
        std::vector<Point> kite2 = {to_cartesian(p[0]), to_cartesian(p[1]),
                                    to_cartesian(fine_c), to_cartesian(p[3])};
        if (detail_adapt::oversized(field, kite2, side, opts.vertex_sampling)) {
          guard_level_cap(level);
          do_refine(c[0]);
        }
      }
    }
  }
  rep.wall_ms = std::chrono::duration<double, std::milli>(
                    std::chrono::steady_clock::now() - t0)
                    .count();
  return rep;
}

/// True iff v may be coarsened under the field: the reverse replacement
/// applies topologically and none of the six next-larger kites around v
/// (constructed synthetically from the hexagon geometry, without mutating
/// the mesh) is oversized.
inline bool is_coarsenable(const Mesh& m, VertexId v, const SizeField& field,
                           bool vertex_sampling = false) {
  if (!m.is_coarsenable_topology(v)) return false;
  const LatticeCoord vp = m.vertex(v).pos;
  const int level = m.face(m.vertex(v).faces.front()).level;
  const double side = side_length_of_level(level - 1);
  auto fine = m.ccw_neighbors(v);
  std::array<LatticeCoord, 6> w;
  for (int i = 0; i < 6; ++i) {
    FaceId f = m.face_in_wedge(v, fine[i], fine[(i + 1) % 6]);
    assert(f != kNoFace);
    w[i] = m.vertex(m.opposite_corner(f, v)).pos;
  }
  for (int i = 0; i < 6; ++i) {
    const LatticeCoord& wa = w[i];
    const LatticeCoord& wb = w[(i + 1) % 6];
    LatticeCoord c = sub(add(wa, wb), vp);  // mirrored neighbor center
    LatticeCoord tip = detail_adapt::third_point(c, vp);
    std::vector<Point> kite = {to_cartesian(vp), to_cartesian(wa),
                               to_cartesian(tip), to_cartesian(wb)};
    if (detail_adapt::oversized(field, kite, side, vertex_sampling)) return false;
  }
  return true;
}

/// Coarsens until no vertex is coarsenable, re-testing the neighbors (and
/// the vertex itself) after every step.
inline void coarsen_to_size(Mesh& m, const SizeField& field, AdaptReport& rep,
                            const AdaptOptions& opts = {}) {
  std::deque<VertexId> queue;
  for (VertexId v = 0; v < m.vertex_capacity(); ++v)
    if (m.vertex_alive(v)) {
      queue.push_back(v);
      ++rep.queue_pushes;
    }
  while (!queue.empty()) {
    VertexId v;
    if (opts.order == QueueOrder::Fifo) {
      v = queue.front();
      queue.pop_front();
    } else {
      v = queue.back();
      queue.pop_back();
    }
    if (!m.vertex_alive(v)) continue;
    if (!is_coarsenable(m, v, field, opts.vertex_sampling)) continue;
    StepDelta delta = m.coarsen_step(v);
    ++rep.coarsen_steps;
    // Re-test everything the step may have unblocked: the vertex itself,
    // its (coarsened) neighbors, and the far corners of the rebuilt
    // straddling quads; a neighboring center whose kite just turned back
    // into a diamond becomes coarsenable without being adjacent to v.
    queue.push_back(v);
    ++rep.queue_pushes;
    for (VertexId u : m.vertex(v).neighbors) {
      queue.push_back(u);
      ++rep.queue_pushes;
    }
    for (FaceId f : delta.added)
      for (VertexId u : m.face(f).corners) {
        queue.push_back(u);
        ++rep.queue_pushes;
      }
  }
}

/// Dynamic adaptation to a changed size function: refine, then coarsen.
/// The result equals refine_to_size on a fresh initial patch.
inline AdaptReport adapt(Mesh& m, const SizeField& field,
                         const AdaptOptions& opts = {}) {
  auto t0 = std::chrono::steady_clock::now();
  AdaptReport rep = refine_to_size(m, field, opts);
  coarsen_to_size(m, field, rep, opts);
  rep.wall_ms = std::chrono::duration<double, std::milli>(
                    std::chrono::steady_clock::now() - t0)
                    .count();
  return rep;
}

}  // namespace dk
