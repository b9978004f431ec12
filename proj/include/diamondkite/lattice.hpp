#pragma once

#include <array>
#include <cstdint>
#include <cstdlib>
#include <functional>
#include <limits>
#include <string>

#include "diamondkite/errors.hpp"

namespace dk {

using Int = std::int64_t;
using Wide = __int128;

/// Finest subdivision level representable with 64-bit coordinates.
constexpr int kMaxLevel = 36;

namespace detail {

inline bool fits_int64(Wide v) {
  return v >= Wide(std::numeric_limits<Int>::min()) &&
         v <= Wide(std::numeric_limits<Int>::max());
}

inline std::string wide_str(Wide v) {
  if (v == 0) return "0";
  bool neg = v < 0;
  std::string s;
  while (v != 0) {
    int d = int(neg ? -(v % 10) : (v % 10));
    s.insert(s.begin(), char('0' + d));
    v /= 10;
  }
  if (neg) s.insert(s.begin(), '-');
  return s;
}

}  // namespace detail

/// Exact position in the subdivision lattice: the planar point
///
///     (a + b*z) / (1+z)^k      with z = e^{i*pi/3},  z^2 = z - 1.
///
/// |1+z| = sqrt(3) and arg(1+z) = 30 degrees, so incrementing k scales by
/// 1/sqrt(3) and rotates by -30 degrees: exactly one subdivision level.
/// Values are kept normalized: either a !== b (mod 3), so k is minimal, or
/// the coordinate is the origin (0, 0, 0).
struct LatticeCoord {
  Int a = 0;
  Int b = 0;
  int k = 0;

  friend bool operator==(const LatticeCoord& x, const LatticeCoord& y) {
    return x.a == y.a && x.b == y.b && x.k == y.k;
  }
  friend bool operator!=(const LatticeCoord& x, const LatticeCoord& y) {
    return !(x == y);
  }
  /// Lexicographic order on the normalized triple; used only for
  /// deterministic tie-breaking, not geometry.
  friend bool operator<(const LatticeCoord& x, const LatticeCoord& y) {
    if (x.a != y.a) return x.a < y.a;
    if (x.b != y.b) return x.b < y.b;
    return x.k < y.k;
  }

  bool is_origin() const { return a == 0 && b == 0; }

  std::string str() const {
    return "(" + std::to_string(a) + "," + std::to_string(b) + "," +
           std::to_string(k) + ")";
  }
};

/// Reduces (a, b, k) to the unique normalized triple for the same point.
/// Reduction rule (divide the numerator by 1+z): when a == b (mod 3),
/// (a, b, k) -> ((2a+b)/3, (b-a)/3, k-1).
inline LatticeCoord normalize(Wide a, Wide b, int k) {
  if (a == 0 && b == 0) return LatticeCoord{0, 0, 0};
  while ((a - b) % 3 == 0) {
    Wide na = (2 * a + b) / 3;
    Wide nb = (b - a) / 3;
    a = na;
    b = nb;
    --k;
  }
  if (!detail::fits_int64(a) || !detail::fits_int64(b))
    throw Error("lattice coordinate overflow: (" + detail::wide_str(a) + "," +
                detail::wide_str(b) + "," + std::to_string(k) + ")");
  return LatticeCoord{Int(a), Int(b), k};
}

inline LatticeCoord make_coord(Int a, Int b, int k) { return normalize(a, b, k); }

namespace detail {

/// Both coordinates rewritten over the common (maximal) scale exponent.
struct Aligned {
  Wide a1, b1, a2, b2;
  int k;
};

/// Multiplies the numerator by (1+z): (a, b) -> (a-b, a+2b), k -> k+1.
inline void unreduce_step(Wide& a, Wide& b) {
  Wide na = a - b;
  Wide nb = a + 2 * b;
  a = na;
  b = nb;
}

inline Aligned align(const LatticeCoord& x, const LatticeCoord& y) {
  Aligned r{x.a, x.b, y.a, y.b, x.k > y.k ? x.k : y.k};
  for (int k = x.k; k < r.k; ++k) unreduce_step(r.a1, r.b1);
  for (int k = y.k; k < r.k; ++k) unreduce_step(r.a2, r.b2);
  return r;
}

}  // namespace detail

inline LatticeCoord add(const LatticeCoord& x, const LatticeCoord& y) {
  auto al = detail::align(x, y);
  return normalize(al.a1 + al.a2, al.b1 + al.b2, al.k);
}

inline LatticeCoord sub(const LatticeCoord& x, const LatticeCoord& y) {
  auto al = detail::align(x, y);
  return normalize(al.a1 - al.a2, al.b1 - al.b2, al.k);
}

inline LatticeCoord negate(const LatticeCoord& x) {
  return LatticeCoord{-x.a, -x.b, x.k};
}

inline LatticeCoord scale(const LatticeCoord& x, Int m) {
  return normalize(Wide(x.a) * m, Wide(x.b) * m, x.k);
}

/// Multiplication by z^m (rotation by m*60 degrees).
inline LatticeCoord mul_unit(const LatticeCoord& x, int m) {
  Wide a = x.a, b = x.b;
  m = ((m % 6) + 6) % 6;
  for (int i = 0; i < m; ++i) {
    Wide na = -b;
    Wide nb = a + b;
    a = na;
    b = nb;
  }
  return normalize(a, b, x.k);
}

/// Multiplication by (1+z)^(-n): n subdivision levels finer (n may be
/// negative to go coarser).
inline LatticeCoord scale_levels(const LatticeCoord& x, int n) {
  return normalize(x.a, x.b, x.k + n);
}

/// Exact division by 3. Always representable: 1/3 = z * (1+z)^(-2).
inline LatticeCoord div3(const LatticeCoord& x) {
  return normalize(-Wide(x.b), Wide(x.a) + Wide(x.b), x.k + 2);
}

/// The midpoint trick is not available (2 is not invertible in the ring),
/// so centroids of three lattice points are the exact primitive instead.
inline LatticeCoord centroid3(const LatticeCoord& x, const LatticeCoord& y,
                              const LatticeCoord& z) {
  return div3(add(add(x, y), z));
}

/// Exact squared length, num / 3^pow3 with num not divisible by 3.
struct SquaredLength {
  Wide num = 0;
  int pow3 = 0;

  static SquaredLength make(Wide num, int pow3) {
    if (num == 0) return SquaredLength{0, 0};
    while (num % 3 == 0) {
      num /= 3;
      --pow3;
    }
    return SquaredLength{num, pow3};
  }

  friend bool operator==(const SquaredLength& x, const SquaredLength& y) {
    return x.num == y.num && x.pow3 == y.pow3;
  }
  friend bool operator!=(const SquaredLength& x, const SquaredLength& y) {
    return !(x == y);
  }

  double to_double() const {
    double v = double(num);
    for (int i = 0; i < pow3; ++i) v /= 3.0;
    for (int i = 0; i > pow3; --i) v *= 3.0;
    return v;
  }
};

namespace detail {

inline Wide pow3w(int n) {
  Wide r = 1;
  for (int i = 0; i < n; ++i) r *= 3;
  return r;
}

/// Both numerators over the common denominator 3^max(pow3).
inline std::pair<Wide, Wide> align3(const SquaredLength& x, const SquaredLength& y) {
  int p = x.pow3 > y.pow3 ? x.pow3 : y.pow3;
  return {x.num * pow3w(p - x.pow3), y.num * pow3w(p - y.pow3)};
}

}  // namespace detail

inline bool operator<(const SquaredLength& x, const SquaredLength& y) {
  auto [nx, ny] = detail::align3(x, y);
  return nx < ny;
}

inline SquaredLength sq_add(const SquaredLength& x, const SquaredLength& y) {
  auto [nx, ny] = detail::align3(x, y);
  return SquaredLength::make(nx + ny, x.pow3 > y.pow3 ? x.pow3 : y.pow3);
}

inline SquaredLength sq_sub(const SquaredLength& x, const SquaredLength& y) {
  auto [nx, ny] = detail::align3(x, y);
  return SquaredLength::make(nx - ny, x.pow3 > y.pow3 ? x.pow3 : y.pow3);
}

inline SquaredLength sq_mul(const SquaredLength& x, const SquaredLength& y) {
  return SquaredLength::make(x.num * y.num, x.pow3 + y.pow3);
}

inline SquaredLength sq_scale(const SquaredLength& x, Wide m) {
  return SquaredLength::make(x.num * m, x.pow3);
}

/// Squared side length of a level-l element: 3^(-l).
inline SquaredLength side2_of_level(int level) {
  return SquaredLength{1, level};
}

/// |x|^2 = (a^2 + a*b + b^2) / 3^k, exact.
inline SquaredLength norm2(const LatticeCoord& x) {
  Wide a = x.a, b = x.b;
  return SquaredLength::make(a * a + a * b + b * b, x.k);
}

inline SquaredLength distance2(const LatticeCoord& x, const LatticeCoord& y) {
  auto al = detail::align(x, y);
  Wide a = al.a1 - al.a2, b = al.b1 - al.b2;
  return SquaredLength::make(a * a + a * b + b * b, al.k);
}

/// Floating-point image of the exact point. Used for output and rendering
/// only, never for topology decisions.
inline std::array<double, 2> to_cartesian(const LatticeCoord& c) {
  static const double kSqrt3 = 1.7320508075688772;
  // Numerator a + b*z in the plane.
  double x = double(c.a) + 0.5 * double(c.b);
  double y = 0.5 * kSqrt3 * double(c.b);
  // Multiply by (1+z)^(-k): scale 3^(-k/2), rotate -30k degrees.
  static const double kCos[12] = {1.0, 0.5 * kSqrt3, 0.5, 0.0, -0.5, -0.5 * kSqrt3,
                                  -1.0, -0.5 * kSqrt3, -0.5, 0.0, 0.5, 0.5 * kSqrt3};
  static const double kSin[12] = {0.0, 0.5, 0.5 * kSqrt3, 1.0, 0.5 * kSqrt3, 0.5,
                                  0.0, -0.5, -0.5 * kSqrt3, -1.0, -0.5 * kSqrt3, -0.5};
  int m = ((-c.k) % 12 + 12) % 12;
  double s = 1.0;
  for (int i = 0; i < c.k; ++i) s /= kSqrt3;
  for (int i = 0; i > c.k; --i) s *= kSqrt3;
  double rx = s * (x * kCos[m] - y * kSin[m]);
  double ry = s * (x * kSin[m] + y * kCos[m]);
  return {rx, ry};
}

// ---------------------------------------------------------------------------
// Exact predicates on lattice vectors. All take coordinates, align them to a
// common scale exponent internally, and work on integers.

namespace detail {

struct IntVec {
  Wide a, b;
};

inline IntVec aligned_diff(const LatticeCoord& to, const LatticeCoord& from,
                           int* k_out = nullptr) {
  auto al = align(to, from);
  if (k_out) *k_out = al.k;
  return IntVec{al.a1 - al.a2, al.b1 - al.b2};
}

/// 2*Re(u * conj(v)): zero iff u,v orthogonal; equals 2*|u||v|*cos(angle).
inline Wide dot2(const IntVec& u, const IntVec& v) {
  return 2 * u.a * v.a + 2 * u.b * v.b + u.a * v.b + u.b * v.a;
}

/// Positive iff v is counterclockwise from u (sign of the cross product).
inline Wide cross_sign(const IntVec& u, const IntVec& v) {
  return u.a * v.b - v.a * u.b;
}

inline Wide norm_int(const IntVec& u) { return u.a * u.a + u.a * u.b + u.b * u.b; }

}  // namespace detail

namespace detail {

/// The two vectors over a common scale exponent with normalized (hence
/// small) numerators; keeps products overflow-safe far from the origin.
inline std::pair<IntVec, IntVec> aligned_pair(const LatticeCoord& u0,
                                              const LatticeCoord& v0) {
  auto al = align(u0, v0);
  return {IntVec{al.a1, al.b1}, IntVec{al.a2, al.b2}};
}

}  // namespace detail

/// Exact interior angle at `corner` between edges to x and y, for the angles
/// that occur in diamond-kite meshes and their duals. Returns 60, 90, or
/// 120, or 0 for anything else. cos = +-1/2 is equivalent to
/// (2|u||v|cos)^2 = |u|^2 |v|^2, an integer identity.
inline int corner_angle(const LatticeCoord& corner, const LatticeCoord& x,
                        const LatticeCoord& y) {
  auto [u, v] = detail::aligned_pair(sub(x, corner), sub(y, corner));
  Wide d = detail::dot2(u, v);
  if (d == 0) return 90;
  if (d * d == detail::norm_int(u) * detail::norm_int(v)) return d > 0 ? 60 : 120;
  return 0;
}

/// True iff the two segments u0->u1 and v0->v1 are perpendicular.
inline bool orthogonal(const LatticeCoord& u0, const LatticeCoord& u1,
                       const LatticeCoord& v0, const LatticeCoord& v1) {
  auto [u, v] = detail::aligned_pair(sub(u1, u0), sub(v1, v0));
  return detail::dot2(u, v) == 0;
}

/// Direction of the vector from->to when it points along a multiple of 30
/// degrees: returns 0..11 (units of 30 degrees, counterclockwise from +x),
/// or -1 for any other direction or the zero vector.
inline int direction_index(const LatticeCoord& from, const LatticeCoord& to) {
  int k = 0;
  auto v = detail::aligned_diff(to, from, &k);
  Wide a = v.a, b = v.b;
  int idx;
  if (a == 0 && b == 0) return -1;
  if (b == 0)
    idx = a > 0 ? 0 : 6;
  else if (a == b)
    idx = a > 0 ? 1 : 7;
  else if (a == 0)
    idx = b > 0 ? 2 : 8;
  else if (b == -2 * a)
    idx = a < 0 ? 3 : 9;
  else if (a == -b)
    idx = b > 0 ? 4 : 10;
  else if (a == -2 * b)
    idx = b > 0 ? 5 : 11;
  else
    return -1;
  // The denominator (1+z)^k rotates the numerator by -30k degrees.
  return ((idx - k) % 12 + 12) % 12;
}

/// Strict counterclockwise ordering of directions around `center`, starting
/// at the positive x axis. Only meaningful for distinct directions.
inline bool ccw_less(const LatticeCoord& center, const LatticeCoord& p,
                     const LatticeCoord& q) {
  auto [u, v] = detail::aligned_pair(sub(p, center), sub(q, center));
  // Half-plane: angle in [0,180) first. Im sign = sign(b); on the real axis,
  // Re sign = sign(a).
  auto half = [](const detail::IntVec& w) {
    if (w.b > 0 || (w.b == 0 && w.a > 0)) return 0;
    return 1;
  };
  int hu = half(u), hv = half(v);
  if (hu != hv) return hu < hv;
  return detail::cross_sign(u, v) > 0;
}

}  // namespace dk

namespace std {
template <>
struct hash<dk::LatticeCoord> {
  size_t operator()(const dk::LatticeCoord& c) const {
    size_t h = std::hash<dk::Int>()(c.a);
    h ^= std::hash<dk::Int>()(c.b) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
    h ^= std::hash<int>()(c.k) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
    return h;
  }
};
}  // namespace std
