#pragma once

// Shared helpers for the test suites: floating-point oracles for the exact
// lattice arithmetic, random lower-set and size-field generators, and
// topological shuffles for confluence checks.

#include <cmath>
#include <complex>
#include <memory>
#include <random>
#include <vector>

#include "diamondkite/adapt.hpp"
#include "diamondkite/mesh.hpp"
#include "diamondkite/size_field.hpp"

namespace dktest {

using Cx = std::complex<double>;

inline Cx zeta() { return std::polar(1.0, M_PI / 3.0); }

/// Independent floating-point image of (a + b*z) / (1+z)^k.
inline Cx to_complex(double a, double b, int k) {
  Cx num = a + b * zeta();
  return num / std::pow(1.0 + zeta(), k);
}

inline Cx to_complex(const dk::LatticeCoord& c) {
  return to_complex(double(c.a), double(c.b), c.k);
}

/// A uniformly random point of the level-j center lattice with |u|,|v|
/// bounded, i.e. (u + v*z) * (1+z)^(1-j).
inline dk::ReplacementKey random_key(std::mt19937_64& rng, int max_level,
                                     dk::Int coord_range) {
  std::uniform_int_distribution<int> lvl(0, max_level);
  std::uniform_int_distribution<dk::Int> uv(-coord_range, coord_range);
  int level = lvl(rng);
  dk::LatticeCoord center = dk::make_coord(uv(rng), uv(rng), level - 1);
  return dk::ReplacementKey{center, level};
}

/// Random lower set, at most max_keys keys, all centers within euclidean
/// distance `bound` of the origin.
inline dk::LowerSet random_lower_set(std::mt19937_64& rng, int max_level,
                                     double bound, std::size_t max_keys) {
  dk::LowerSet set;
  for (int tries = 0; tries < 200; ++tries) {
    dk::ReplacementKey key = random_key(rng, max_level, dk::Int(bound));
    if (std::abs(to_complex(key.center)) > bound) continue;
    dk::LowerSet grown = dk::join(set, dk::close_down({key}));
    bool inside = true;
    for (const auto& k : grown)
      if (std::abs(to_complex(k.center)) > bound + 2.5) inside = false;
    if (!inside || grown.size() > max_keys) continue;
    set = grown;
    if (set.size() >= max_keys - 3) break;
  }
  return set;
}

/// Patch radius large enough to replay keys within euclidean `bound`.
inline int patch_radius_for(double bound) {
  return int(std::ceil((bound + 4.0) / std::sqrt(3.0))) + 2;
}

/// Random linear extension of the prerequisite order (Kahn's algorithm with
/// random tie-breaking).
inline std::vector<dk::ReplacementKey> random_linearization(
    const dk::LowerSet& set, std::mt19937_64& rng) {
  std::vector<dk::ReplacementKey> keys(set.begin(), set.end());
  std::vector<std::vector<std::size_t>> dependents(keys.size());
  std::vector<int> missing(keys.size(), 0);
  auto index_of = [&](const dk::ReplacementKey& k) -> std::size_t {
    return std::size_t(std::lower_bound(keys.begin(), keys.end(), k) - keys.begin());
  };
  for (std::size_t i = 0; i < keys.size(); ++i) {
    for (const auto& p : dk::prerequisites(keys[i])) {
      dependents[index_of(p)].push_back(i);
      ++missing[i];
    }
  }
  std::vector<std::size_t> ready;
  for (std::size_t i = 0; i < keys.size(); ++i)
    if (missing[i] == 0) ready.push_back(i);
  std::vector<dk::ReplacementKey> out;
  out.reserve(keys.size());
  while (!ready.empty()) {
    std::uniform_int_distribution<std::size_t> pick(0, ready.size() - 1);
    std::size_t at = pick(rng);
    std::size_t i = ready[at];
    ready[at] = ready.back();
    ready.pop_back();
    out.push_back(keys[i]);
    for (std::size_t d : dependents[i])
      if (--missing[d] == 0) ready.push_back(d);
  }
  return out;
}

/// Random built-in size field whose refinement stays well inside a patch of
/// the given radius: sigma >= 1.05 on a wide annulus along the rim, floors
/// bounded below so levels stay modest.
inline std::unique_ptr<dk::SizeField> random_safe_field(std::mt19937_64& rng,
                                                        int patch_radius,
                                                        double min_floor = 0.06) {
  double extent = 1.7320508075688772 * (patch_radius + 1);
  std::uniform_real_distribution<double> u01(0.0, 1.0);
  for (int attempt = 0; attempt < 100; ++attempt) {
    std::unique_ptr<dk::SizeField> field;
    int kind = int(u01(rng) * 4.0);
    double floor = min_floor + u01(rng) * 0.3;
    double feature = extent - 9.5;  // keep features this far from the rim
    if (feature < 1.0) feature = 1.0;
    switch (kind) {
      case 0:
        // At or above the level-0 side, so the rim never needs refinement.
        field = std::make_unique<dk::ConstantField>(1.0 + u01(rng) * 1.2);
        break;
      case 1: {
        dk::Point c{(u01(rng) - 0.5) * feature, (u01(rng) - 0.5) * feature};
        field = std::make_unique<dk::PointDistanceField>(c, 0.4 + u01(rng) * 0.8, floor);
        break;
      }
      case 2: {
        dk::Point c{(u01(rng) - 0.5) * 0.4 * feature, (u01(rng) - 0.5) * 0.4 * feature};
        double r = 1.0 + u01(rng) * 0.45 * feature;
        field = std::make_unique<dk::CircleDistanceField>(c, r, 0.35 + u01(rng) * 0.8, floor);
        break;
      }
      default: {
        double gx = (u01(rng) - 0.5) * 0.3;
        double gy = (u01(rng) - 0.5) * 0.3;
        field = std::make_unique<dk::RampField>(0.4 + u01(rng) * 0.8, gx, gy,
                                                std::max(floor, 0.15));
        break;
      }
    }
    if (kind == 0) return field;
    // Reject any field that could force replacements near the rim: a forced
    // step's prerequisite chain drifts outward by at most 1/(1-3^(-1/2)) ~
    // 2.37, plus the hexagon itself and its fan. Require sigma >= 1.05
    // everywhere within 8.5 units of the patch boundary.
    bool safe = true;
    for (double r = extent - 8.5; r <= extent + 0.5 && safe; r += 0.4)
      for (int i = 0; i < 72 && safe; ++i) {
        double th = 2.0 * M_PI * i / 72.0;
        if (field->eval({r * std::cos(th), r * std::sin(th)}) < 1.05) safe = false;
      }
    if (safe) return field;
  }
  return std::make_unique<dk::ConstantField>(1.0);
}

}  // namespace dktest
