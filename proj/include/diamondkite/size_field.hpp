#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <memory>
#include <string>
#include <vector>

#include "diamondkite/errors.hpp"

namespace dk {

using Point = std::array<double, 2>;

/// Local size function: sigma(p) > 0 is the largest allowable side length of
/// an element containing p. Implementations must be pure and reentrant;
/// min_over_polygon must lower-bound sigma over the whole (convex) polygon,
/// and equals the exact infimum for the analytic built-in fields.
class SizeField {
 public:
  virtual ~SizeField() = default;
  virtual double eval(const Point& p) const = 0;
  virtual double min_over_polygon(const std::vector<Point>& poly) const = 0;
  virtual std::string describe() const = 0;
};

namespace fieldgeo {

inline double dist(const Point& a, const Point& b) {
  return std::hypot(a[0] - b[0], a[1] - b[1]);
}

inline double dist_point_segment(const Point& p, const Point& a, const Point& b) {
  double vx = b[0] - a[0], vy = b[1] - a[1];
  double wx = p[0] - a[0], wy = p[1] - a[1];
  double vv = vx * vx + vy * vy;
  double t = vv > 0 ? (wx * vx + wy * vy) / vv : 0.0;
  t = std::clamp(t, 0.0, 1.0);
  return std::hypot(wx - t * vx, wy - t * vy);
}

inline bool point_in_convex(const Point& p, const std::vector<Point>& poly) {
  int pos = 0, neg = 0;
  int n = int(poly.size());
  for (int i = 0; i < n; ++i) {
    const Point& a = poly[i];
    const Point& b = poly[(i + 1) % n];
    double cr = (b[0] - a[0]) * (p[1] - a[1]) - (b[1] - a[1]) * (p[0] - a[0]);
    if (cr > 0) ++pos;
    if (cr < 0) ++neg;
  }
  return pos == 0 || neg == 0;
}

/// Range [dmin, dmax] of distances from `c` to the convex polygon.
inline std::pair<double, double> distance_range(const Point& c,
                                                const std::vector<Point>& poly) {
  double dmax = 0.0;
  for (const auto& q : poly) dmax = std::max(dmax, dist(c, q));
  double dmin;
  if (point_in_convex(c, poly)) {
    dmin = 0.0;
  } else {
    dmin = std::numeric_limits<double>::infinity();
    int n = int(poly.size());
    for (int i = 0; i < n; ++i)
      dmin = std::min(dmin, dist_point_segment(c, poly[i], poly[(i + 1) % n]));
  }
  return {dmin, dmax};
}

inline std::string num(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%g", v);
  return buf;
}

}  // namespace fieldgeo

/// Default lower clamp for the analytic distance-like fields; keeps sigma
/// strictly positive and refinement finite at a moderate depth.
inline constexpr double kDefaultFloor = 1.0 / 81.0;  // 3^-4

/// Default lower clamp for grid-sampled fields.
inline constexpr double kGridFloor = 1.0 / 531441.0;  // 3^-12

class ConstantField final : public SizeField {
 public:
  explicit ConstantField(double value) : value_(value) {
    if (!(value > 0)) throw FormatError("constant size field requires value > 0");
  }
  double eval(const Point&) const override { return value_; }
  double min_over_polygon(const std::vector<Point>&) const override { return value_; }
  std::string describe() const override {
    return "constant:value=" + fieldgeo::num(value_);
  }

 private:
  double value_;
};

/// sigma(p) = max(floor, scale * |p - c|).
class PointDistanceField final : public SizeField {
 public:
  PointDistanceField(Point c, double scale, double floor = kDefaultFloor)
      : c_(c), scale_(scale), floor_(floor) {
    if (!(scale > 0) || !(floor > 0))
      throw FormatError("point size field requires scale > 0 and floor > 0");
  }
  double eval(const Point& p) const override {
    return std::max(floor_, scale_ * fieldgeo::dist(p, c_));
  }
  double min_over_polygon(const std::vector<Point>& poly) const override {
    auto [dmin, dmax] = fieldgeo::distance_range(c_, poly);
    (void)dmax;
    return std::max(floor_, scale_ * dmin);
  }
  std::string describe() const override {
    return "point:cx=" + fieldgeo::num(c_[0]) + ",cy=" + fieldgeo::num(c_[1]) +
           ",scale=" + fieldgeo::num(scale_) + ",floor=" + fieldgeo::num(floor_);
  }

 private:
  Point c_;
  double scale_, floor_;
};

/// sigma(p) = max(floor, scale * | |p - c| - r |): distance to a circle.
class CircleDistanceField final : public SizeField {
 public:
  CircleDistanceField(Point c, double r, double scale, double floor = kDefaultFloor)
      : c_(c), r_(r), scale_(scale), floor_(floor) {
    if (!(r > 0) || !(scale > 0) || !(floor > 0))
      throw FormatError("circle size field requires r, scale, floor > 0");
  }
  double eval(const Point& p) const override {
    return std::max(floor_, scale_ * std::fabs(fieldgeo::dist(p, c_) - r_));
  }
  double min_over_polygon(const std::vector<Point>& poly) const override {
    auto [dmin, dmax] = fieldgeo::distance_range(c_, poly);
    double d;
    if (r_ >= dmin && r_ <= dmax)
      d = 0.0;  // the circle passes through the polygon
    else
      d = std::min(std::fabs(dmin - r_), std::fabs(dmax - r_));
    return std::max(floor_, scale_ * d);
  }
  std::string describe() const override {
    return "circle:cx=" + fieldgeo::num(c_[0]) + ",cy=" + fieldgeo::num(c_[1]) +
           ",r=" + fieldgeo::num(r_) + ",scale=" + fieldgeo::num(scale_) +
           ",floor=" + fieldgeo::num(floor_);
  }

 private:
  Point c_;
  double r_, scale_, floor_;
};

/// sigma(p) = max(floor, base + gx*x + gy*y): linear ramp. The minimum over
/// a convex polygon is attained at a corner.
class RampField final : public SizeField {
 public:
  RampField(double base, double gx, double gy, double floor = kDefaultFloor)
      : base_(base), gx_(gx), gy_(gy), floor_(floor) {
    if (!(floor > 0)) throw FormatError("ramp size field requires floor > 0");
  }
  double eval(const Point& p) const override {
    return std::max(floor_, base_ + gx_ * p[0] + gy_ * p[1]);
  }
  double min_over_polygon(const std::vector<Point>& poly) const override {
    double m = std::numeric_limits<double>::infinity();
    for (const auto& p : poly) m = std::min(m, base_ + gx_ * p[0] + gy_ * p[1]);
    return std::max(floor_, m);
  }
  std::string describe() const override {
    return "ramp:base=" + fieldgeo::num(base_) + ",gx=" + fieldgeo::num(gx_) +
           ",gy=" + fieldgeo::num(gy_) + ",floor=" + fieldgeo::num(floor_);
  }

 private:
  double base_, gx_, gy_, floor_;
};

/// Bilinear interpolation over a regular sample grid, clamped to the border
/// outside, with a declared Lipschitz constant certifying the polygon lower
/// bound: min over corners minus K times the corner covering radius.
class GridField final : public SizeField {
 public:
  GridField(int nx, int ny, Point origin, double spacing, std::vector<double> values,
            double lipschitz, double floor = kDefaultFloor)
      : nx_(nx), ny_(ny), origin_(origin), spacing_(spacing),
        values_(std::move(values)), lip_(lipschitz), floor_(floor) {
    if (nx_ < 2 || ny_ < 2 || int(values_.size()) != nx_ * ny_)
      throw FormatError("grid size field: need nx*ny samples, nx,ny >= 2");
    if (!(spacing_ > 0) || !(lip_ >= 0) || !(floor_ > 0))
      throw FormatError("grid size field requires spacing > 0, lip >= 0, floor > 0");
    // The declared constant must dominate the sampled slopes.
    double steep = 0.0;
    for (int j = 0; j < ny_; ++j)
      for (int i = 0; i < nx_; ++i) {
        if (i + 1 < nx_) steep = std::max(steep, std::fabs(at(i + 1, j) - at(i, j)));
        if (j + 1 < ny_) steep = std::max(steep, std::fabs(at(i, j + 1) - at(i, j)));
      }
    steep /= spacing_;
    // Bilinear gradient along an axis is bounded by the max sample slope on
    // that axis; the two axes combine to at most sqrt(2) of it.
    if (lip_ < steep * 1.4142135623730951 - 1e-12)
      throw FormatError("grid size field: declared Lipschitz constant " +
                        fieldgeo::num(lip_) + " below sampled slope bound " +
                        fieldgeo::num(steep * 1.4142135623730951));
  }

  double eval(const Point& p) const override {
    double fx = std::clamp((p[0] - origin_[0]) / spacing_, 0.0, double(nx_ - 1));
    double fy = std::clamp((p[1] - origin_[1]) / spacing_, 0.0, double(ny_ - 1));
    int i = std::min(int(fx), nx_ - 2);
    int j = std::min(int(fy), ny_ - 2);
    double tx = fx - i, ty = fy - j;
    double v = (1 - tx) * (1 - ty) * at(i, j) + tx * (1 - ty) * at(i + 1, j) +
               (1 - tx) * ty * at(i, j + 1) + tx * ty * at(i + 1, j + 1);
    return std::max(floor_, v);
  }

  double min_over_polygon(const std::vector<Point>& poly) const override {
    double m = std::numeric_limits<double>::infinity();
    for (const auto& p : poly) m = std::min(m, eval(p));
    // Covering radius bound for diamond/kite corners: side / sqrt(3).
    double side = 0.0;
    int n = int(poly.size());
    for (int i = 0; i < n; ++i)
      side = std::max(side, fieldgeo::dist(poly[i], poly[(i + 1) % n]));
    return std::max(floor_, m - lip_ * side * 0.5773502691896258);
  }

  std::string describe() const override {
    return "grid:nx=" + std::to_string(nx_) + ",ny=" + std::to_string(ny_) +
           ",lip=" + fieldgeo::num(lip_) + ",floor=" + fieldgeo::num(floor_);
  }

 private:
  double at(int i, int j) const { return values_[std::size_t(j) * nx_ + i]; }

  int nx_, ny_;
  Point origin_;
  double spacing_;
  std::vector<double> values_;
  double lip_, floor_;
};

}  // namespace dk
