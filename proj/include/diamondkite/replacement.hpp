#pragma once

#include <algorithm>
#include <set>
#include <string>
#include <vector>

#include "diamondkite/errors.hpp"
#include "diamondkite/lattice.hpp"

namespace dk {

/// One local replacement step: the hexagon of side 3^(-level/2) centered at
/// `center` has its six spokes replaced by six finer diamonds. Level-0 keys
/// act on the initial tiling.
struct ReplacementKey {
  LatticeCoord center;
  int level = 0;

  friend bool operator==(const ReplacementKey& x, const ReplacementKey& y) {
    return x.level == y.level && x.center == y.center;
  }
  friend bool operator!=(const ReplacementKey& x, const ReplacementKey& y) {
    return !(x == y);
  }
  /// Canonical order (level, a, b, k): used for serialization and for
  /// deterministic linearization tie-breaking.
  friend bool operator<(const ReplacementKey& x, const ReplacementKey& y) {
    if (x.level != y.level) return x.level < y.level;
    if (x.center.a != y.center.a) return x.center.a < y.center.a;
    if (x.center.b != y.center.b) return x.center.b < y.center.b;
    return x.center.k < y.center.k;
  }

  std::string str() const {
    return "(" + center.str() + " @" + std::to_string(level) + ")";
  }
};

/// True iff p is a potential replacement center at level j. The level-j
/// center lattice is (1+z)^(1-j) * Z[z]: normalized scale exponent k <= j-1.
/// The origin lies on every center lattice.
inline bool is_center(const LatticeCoord& p, int j) {
  if (j < 0) throw PreconditionViolation("is_center: negative level");
  if (p.is_origin()) return true;
  return p.k <= j - 1;
}

inline bool is_valid_key(const ReplacementKey& key) {
  return key.level >= 0 && key.level <= kMaxLevel && is_center(key.center, key.level);
}

inline void require_valid_key(const ReplacementKey& key) {
  if (key.level < 0 || key.level > kMaxLevel)
    throw PreconditionViolation("replacement level " + std::to_string(key.level) +
                                " outside [0, " + std::to_string(kMaxLevel) + "]");
  if (!is_center(key.center, key.level))
    throw PreconditionViolation("invalid replacement key: " + key.center.str() +
                                " is not a level-" + std::to_string(key.level) +
                                " center");
}

/// The immediate prerequisites of a replacement step: none at level 0; the
/// same center one level coarser if it is also a center there; otherwise the
/// three adjacent coarser centers, 120 degrees apart at distance
/// 3^(-(level-1)/2). Exactly three of the six unit displacements land on
/// valid centers.
inline std::vector<ReplacementKey> prerequisites(const ReplacementKey& key) {
  require_valid_key(key);
  if (key.level == 0) return {};
  int j1 = key.level - 1;
  if (is_center(key.center, j1)) return {ReplacementKey{key.center, j1}};
  std::vector<ReplacementKey> out;
  LatticeCoord step = make_coord(1, 0, j1);
  for (int m = 0; m < 6; ++m) {
    LatticeCoord q = add(key.center, mul_unit(step, m));
    if (is_center(q, j1)) out.push_back(ReplacementKey{q, j1});
  }
  if (out.size() != 3)
    throw Error("prerequisite enumeration found " + std::to_string(out.size()) +
                " centers around " + key.center.str() + ", expected 3");
  std::sort(out.begin(), out.end());
  return out;
}

/// A finite, downward-closed set of replacement keys: the canonical identity
/// of a mesh refinement. Iteration order is the canonical key order.
class LowerSet {
 public:
  using const_iterator = std::set<ReplacementKey>::const_iterator;

  LowerSet() = default;

  bool contains(const ReplacementKey& key) const { return keys_.count(key) != 0; }
  std::size_t size() const { return keys_.size(); }
  bool empty() const { return keys_.empty(); }
  const_iterator begin() const { return keys_.begin(); }
  const_iterator end() const { return keys_.end(); }

  /// Inserts a key whose prerequisites are already present.
  void insert(const ReplacementKey& key) {
    require_valid_key(key);
    for (const auto& p : prerequisites(key))
      if (!contains(p))
        throw PreconditionViolation("inserting " + key.str() +
                                    " would break downward closure (missing " +
                                    p.str() + ")");
    keys_.insert(key);
  }

  /// Removes a key; only maximal keys may be removed (checked by callers /
  /// validate()).
  void erase(const ReplacementKey& key) { keys_.erase(key); }

  /// True iff no other key in the set depends on `key`.
  bool is_maximal(const ReplacementKey& key) const {
    for (const auto& other : keys_) {
      if (other.level != key.level + 1) continue;
      for (const auto& p : prerequisites(other))
        if (p == key) return false;
    }
    return true;
  }

  /// Verifies downward closure of the whole set.
  bool is_downward_closed() const {
    for (const auto& key : keys_)
      for (const auto& p : prerequisites(key))
        if (!contains(p)) return false;
    return true;
  }

  friend bool operator==(const LowerSet& x, const LowerSet& y) {
    return x.keys_ == y.keys_;
  }
  friend bool operator!=(const LowerSet& x, const LowerSet& y) { return !(x == y); }

  friend LowerSet meet(const LowerSet& x, const LowerSet& y);
  friend LowerSet join(const LowerSet& x, const LowerSet& y);
  friend LowerSet close_down(const std::vector<ReplacementKey>& seed);

 private:
  std::set<ReplacementKey> keys_;
};

/// Smallest lower set containing `seed`: transitively adds prerequisites.
inline LowerSet close_down(const std::vector<ReplacementKey>& seed) {
  LowerSet out;
  std::vector<ReplacementKey> stack(seed);
  for (const auto& key : stack) require_valid_key(key);
  while (!stack.empty()) {
    ReplacementKey key = stack.back();
    stack.pop_back();
    if (out.keys_.count(key)) continue;
    out.keys_.insert(key);
    for (const auto& p : prerequisites(key))
      if (!out.keys_.count(p)) stack.push_back(p);
  }
  return out;
}

/// Finest common coarsening: plain set intersection. Closure is automatic
/// (intersection of lower sets is a lower set) and asserted.
inline LowerSet meet(const LowerSet& x, const LowerSet& y) {
  LowerSet out;
  std::set_intersection(x.keys_.begin(), x.keys_.end(), y.keys_.begin(),
                        y.keys_.end(), std::inserter(out.keys_, out.keys_.end()));
  if (!out.is_downward_closed()) throw Error("meet produced a non-lower set");
  return out;
}

/// Coarsest common refinement: plain set union.
inline LowerSet join(const LowerSet& x, const LowerSet& y) {
  LowerSet out;
  std::set_union(x.keys_.begin(), x.keys_.end(), y.keys_.begin(), y.keys_.end(),
                 std::inserter(out.keys_, out.keys_.end()));
  if (!out.is_downward_closed()) throw Error("join produced a non-lower set");
  return out;
}

/// Deterministic topological order of the prerequisite relation. A key's
/// prerequisites sit at strictly smaller levels, so the canonical
/// (level, a, b, k) order is already a linear extension.
inline std::vector<ReplacementKey> linearize(const LowerSet& set) {
  return std::vector<ReplacementKey>(set.begin(), set.end());
}

}  // namespace dk
