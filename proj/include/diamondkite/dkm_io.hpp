#pragma once

#include <cstdlib>
#include <sstream>
#include <string>
#include <vector>

#include "diamondkite/errors.hpp"
#include "diamondkite/mesh.hpp"

namespace dk {

/// The .dkm persistent format stores the patch descriptor and the canonical
/// lower set, the identity of the mesh. Geometry is always rederived by
/// replay. Line-oriented, integers only:
///
///     dkm 1
///     radius <R>
///     keys <N>
///     <level> <a> <b> <k>     (N lines, canonical (level,a,b,k) order)
inline constexpr int kDkmVersion = 1;

inline std::string serialize(int radius, const LowerSet& keys) {
  std::ostringstream out;
  out << "dkm " << kDkmVersion << "\n";
  out << "radius " << radius << "\n";
  out << "keys " << keys.size() << "\n";
  for (const auto& key : keys)
    out << key.level << " " << key.center.a << " " << key.center.b << " "
        << key.center.k << "\n";
  return out.str();
}

inline std::string serialize(const Mesh& m) {
  return serialize(m.patch_radius(), m.applied());
}

struct DkmFile {
  int radius = 0;
  LowerSet keys;
};

inline DkmFile parse_dkm(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  int line_no = 0;
  auto next_line = [&]() -> std::string {
    if (!std::getline(in, line)) throw FormatError("unexpected end of file", line_no);
    ++line_no;
    return line;
  };

  {
    std::istringstream hdr(next_line());
    std::string magic;
    int version = -1;
    if (!(hdr >> magic >> version) || magic != "dkm")
      throw FormatError("expected header 'dkm <version>'", line_no);
    if (version != kDkmVersion)
      throw FormatError("unsupported version " + std::to_string(version), line_no);
  }
  DkmFile file;
  {
    std::istringstream rl(next_line());
    std::string tok;
    if (!(rl >> tok >> file.radius) || tok != "radius" || file.radius < 1)
      throw FormatError("expected 'radius <R>' with R >= 1", line_no);
  }
  long n = -1;
  {
    std::istringstream kl(next_line());
    std::string tok;
    if (!(kl >> tok >> n) || tok != "keys" || n < 0)
      throw FormatError("expected 'keys <N>'", line_no);
  }
  std::vector<ReplacementKey> keys;
  keys.reserve(std::size_t(n));
  for (long i = 0; i < n; ++i) {
    std::istringstream ks(next_line());
    long long level, a, b, k;
    std::string extra;
    if (!(ks >> level >> a >> b >> k) || (ks >> extra))
      throw FormatError("expected '<level> <a> <b> <k>'", line_no);
    ReplacementKey key{LatticeCoord{Int(a), Int(b), int(k)}, int(level)};
    if (key.center != make_coord(Int(a), Int(b), int(k)))
      throw FormatError("center (" + std::to_string(a) + "," + std::to_string(b) + "," +
                            std::to_string(k) + ") is not normalized",
                        line_no);
    if (!is_valid_key(key))
      throw FormatError("invalid replacement key: not a level-" +
                            std::to_string(level) + " center",
                        line_no);
    if (!keys.empty() && !(keys.back() < key))
      throw FormatError("keys not in canonical (level,a,b,k) order", line_no);
    keys.push_back(key);
  }
  if (std::getline(in, line) && !line.empty())
    throw FormatError("trailing content after key list", line_no + 1);
  LowerSet set = close_down(keys);
  if (set.size() != keys.size())
    throw FormatError("key list is not downward closed");
  file.keys = std::move(set);
  return file;
}

/// Parses and replays. Keys outside the patch surface as BoundaryViolation.
inline Mesh parse_mesh(const std::string& text) {
  DkmFile file = parse_dkm(text);
  return Mesh::replay(file.radius, file.keys);
}

}  // namespace dk
