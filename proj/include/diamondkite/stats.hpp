#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <random>
#include <unordered_map>
#include <vector>

#include "diamondkite/adapt.hpp"
#include "diamondkite/mesh.hpp"
#include "diamondkite/size_field.hpp"

namespace dk {

struct MeshStats {
  long faces = 0;
  long vertices = 0;
  long edges = 0;
  std::map<int, long> face_levels;       // level -> face count
  std::map<int, long> diamond_levels;    // level -> diamond count
  std::map<int, long> kite_levels;       // level -> kite count
  std::map<int, long> edge_levels;       // level -> edge count
  double total_edge_length = 0.0;
  double total_area = 0.0;
  double total_perimeter = 0.0;
  int min_angle = 0;   // 60 on any nonempty mesh
  int max_angle = 0;   // 120 on any nonempty mesh
  long samples_requested = 0;
  long samples_located = 0;
  std::vector<double> lfs_ratios;  // side(element containing p) / lfs estimate
  double ratio_min = 0.0, ratio_max = 0.0, ratio_mean = 0.0;
};

/// Exact closed forms per face: a level-l diamond has side s = 3^(-l/2),
/// area s^2*sqrt(3)/2, perimeter 4s; a kite has area s^2/sqrt(3) and
/// perimeter 2s(1 + 1/sqrt(3)).
inline double face_area(Shape shape, int level) {
  double s = side_length_of_level(level);
  const double kSqrt3 = 1.7320508075688772;
  return shape == Shape::Diamond ? s * s * kSqrt3 / 2.0 : s * s / kSqrt3;
}

inline double face_perimeter(Shape shape, int level) {
  double s = side_length_of_level(level);
  const double kSqrt3 = 1.7320508075688772;
  return shape == Shape::Diamond ? 4.0 * s : 2.0 * s * (1.0 + 1.0 / kSqrt3);
}

/// Certified upper estimate of the local feature size
/// inf_q { dist(p,q) + sigma(q) }: the minimum over a finite candidate set
/// (p itself, mesh vertices in the search disk, and a uniform grid there).
/// The true infimum lies within a disk of radius sigma(p) around p.
inline double lfs_upper_estimate(const Mesh& m, const SizeField& field,
                                 const Point& p, double finest_side) {
  double radius = field.eval(p);
  double best = radius;  // candidate q = p
  for (VertexId v = 0; v < m.vertex_capacity(); ++v) {
    if (!m.vertex_alive(v)) continue;
    Point q = to_cartesian(m.vertex(v).pos);
    double d = std::hypot(q[0] - p[0], q[1] - p[1]);
    if (d <= radius) best = std::min(best, d + field.eval(q));
  }
  double h = std::max(radius / 32.0, finest_side);
  for (double x = p[0] - radius; x <= p[0] + radius; x += h) {
    for (double y = p[1] - radius; y <= p[1] + radius; y += h) {
      double d = std::hypot(x - p[0], y - p[1]);
      if (d <= radius) best = std::min(best, d + field.eval({x, y}));
    }
  }
  return best;
}

/// Uniform-bucket point location over face bounding boxes.
class FaceLocator {
 public:
  explicit FaceLocator(const Mesh& m) : mesh_(m) {
    lo_ = {std::numeric_limits<double>::infinity(),
           std::numeric_limits<double>::infinity()};
    hi_ = {-std::numeric_limits<double>::infinity(),
           -std::numeric_limits<double>::infinity()};
    for (VertexId v = 0; v < m.vertex_capacity(); ++v) {
      if (!m.vertex_alive(v)) continue;
      Point q = to_cartesian(m.vertex(v).pos);
      lo_[0] = std::min(lo_[0], q[0]);
      lo_[1] = std::min(lo_[1], q[1]);
      hi_[0] = std::max(hi_[0], q[0]);
      hi_[1] = std::max(hi_[1], q[1]);
    }
    for (FaceId f = 0; f < m.face_capacity(); ++f) {
      if (!m.face_alive(f)) continue;
      auto poly = detail_adapt::face_polygon(m, f);
      double x0 = poly[0][0], x1 = x0, y0 = poly[0][1], y1 = y0;
      for (const auto& q : poly) {
        x0 = std::min(x0, q[0]);
        x1 = std::max(x1, q[0]);
        y0 = std::min(y0, q[1]);
        y1 = std::max(y1, q[1]);
      }
      for (long ix = cell(x0); ix <= cell(x1); ++ix)
        for (long iy = cell(y0); iy <= cell(y1); ++iy)
          buckets_[pack(ix, iy)].push_back(f);
    }
  }

  Point low() const { return lo_; }
  Point high() const { return hi_; }

  FaceId locate(const Point& p) const {
    auto it = buckets_.find(pack(cell(p[0]), cell(p[1])));
    if (it == buckets_.end()) return kNoFace;
    for (FaceId f : it->second)
      if (fieldgeo::point_in_convex(p, detail_adapt::face_polygon(mesh_, f))) return f;
    return kNoFace;
  }

 private:
  static long cell(double x) { return std::lround(std::floor(x)); }
  static std::uint64_t pack(long ix, long iy) {
    return (std::uint64_t(std::uint32_t(ix)) << 32) | std::uint32_t(iy);
  }

  const Mesh& mesh_;
  Point lo_, hi_;
  std::unordered_map<std::uint64_t, std::vector<FaceId>> buckets_;
};

/// Counts, totals, level histograms, and sampled local-feature-size ratios.
/// Totals are accumulated from integer per-level counts, so they do not
/// depend on traversal order.
inline MeshStats stats(const Mesh& m, const SizeField& field, int samples,
                       std::uint64_t seed = 7) {
  MeshStats s;
  s.faces = m.face_count();
  s.vertices = m.vertex_count();
  s.edges = m.edge_count();
  int finest = 0;
  for (FaceId f = 0; f < m.face_capacity(); ++f) {
    if (!m.face_alive(f)) continue;
    const QuadFace& q = m.face(f);
    ++s.face_levels[q.level];
    ++(q.shape == Shape::Diamond ? s.diamond_levels : s.kite_levels)[q.level];
    finest = std::max(finest, int(q.level));
  }
  m.for_each_edge([&](VertexId u, VertexId v, int) {
    SquaredLength d2 = distance2(m.vertex(u).pos, m.vertex(v).pos);
    assert(d2.num == 1);
    ++s.edge_levels[d2.pow3];
  });
  for (auto [level, n] : s.edge_levels)
    s.total_edge_length += double(n) * side_length_of_level(level);
  for (auto [level, n] : s.diamond_levels) {
    s.total_area += double(n) * face_area(Shape::Diamond, level);
    s.total_perimeter += double(n) * face_perimeter(Shape::Diamond, level);
  }
  for (auto [level, n] : s.kite_levels) {
    s.total_area += double(n) * face_area(Shape::Kite, level);
    s.total_perimeter += double(n) * face_perimeter(Shape::Kite, level);
  }
  if (s.faces > 0) {
    s.min_angle = 60;
    s.max_angle = 120;
  }

  s.samples_requested = samples;
  if (samples > 0 && s.faces > 0) {
    FaceLocator locator(m);
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> ux(locator.low()[0], locator.high()[0]);
    std::uniform_real_distribution<double> uy(locator.low()[1], locator.high()[1]);
    double finest_side = side_length_of_level(finest);
    long attempts = 0, max_attempts = 64L * samples;
    while (s.samples_located < samples && attempts++ < max_attempts) {
      Point p{ux(rng), uy(rng)};
      FaceId f = locator.locate(p);
      if (f == kNoFace) continue;
      ++s.samples_located;
      double side = side_length_of_level(m.face(f).level);
      double lfs = lfs_upper_estimate(m, field, p, finest_side);
      s.lfs_ratios.push_back(side / lfs);
    }
    if (!s.lfs_ratios.empty()) {
      s.ratio_min = *std::min_element(s.lfs_ratios.begin(), s.lfs_ratios.end());
      s.ratio_max = *std::max_element(s.lfs_ratios.begin(), s.lfs_ratios.end());
      double sum = 0;
      for (double r : s.lfs_ratios) sum += r;
      s.ratio_mean = sum / double(s.lfs_ratios.size());
    }
  }
  return s;
}

}  // namespace dk
