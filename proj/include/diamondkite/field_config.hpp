#pragma once

#include <cstdlib>
#include <fstream>
#include <map>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include "diamondkite/errors.hpp"
#include "diamondkite/size_field.hpp"

namespace dk {

/// Parsed form of the size-field mini-grammar `kind:key=val,key=val`.
/// Kinds: constant, point, circle, ramp, grid. The grid kind takes
/// file=<path> plus lip=<Lipschitz constant>.
struct SizeFieldConfig {
  std::string kind;
  std::map<std::string, double> numbers;
  std::map<std::string, std::string> strings;

  bool has(const std::string& key) const { return numbers.count(key) != 0; }
  double get(const std::string& key) const {
    auto it = numbers.find(key);
    if (it == numbers.end())
      throw FormatError("size field '" + kind + "' is missing parameter '" + key + "'");
    return it->second;
  }
  double get_or(const std::string& key, double dflt) const {
    auto it = numbers.find(key);
    return it == numbers.end() ? dflt : it->second;
  }
};

inline SizeFieldConfig parse_field_config(const std::string& text) {
  SizeFieldConfig cfg;
  auto colon = text.find(':');
  cfg.kind = text.substr(0, colon);
  if (cfg.kind != "constant" && cfg.kind != "point" && cfg.kind != "circle" &&
      cfg.kind != "ramp" && cfg.kind != "grid")
    throw FormatError("unknown size field kind '" + cfg.kind + "'");
  if (colon == std::string::npos) return cfg;
  std::string rest = text.substr(colon + 1);
  std::stringstream ss(rest);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    auto eq = item.find('=');
    if (eq == std::string::npos)
      throw FormatError("size field parameter '" + item + "' is not key=value");
    std::string key = item.substr(0, eq);
    std::string val = item.substr(eq + 1);
    if (key == "file") {
      cfg.strings[key] = val;
      continue;
    }
    char* end = nullptr;
    double num = std::strtod(val.c_str(), &end);
    if (end == val.c_str() || *end != '\0')
      throw FormatError("size field parameter '" + key + "' has non-numeric value '" +
                        val + "'");
    cfg.numbers[key] = num;
  }
  return cfg;
}

/// Grid sample file: one header line `nx ny x0 y0 spacing`, then nx*ny
/// values in row-major order (y rows outer).
inline GridField load_grid_field(const std::string& path, double lipschitz,
                                 double floor) {
  std::ifstream in(path);
  if (!in) throw FormatError("cannot open grid file '" + path + "'");
  int nx = 0, ny = 0;
  double x0 = 0, y0 = 0, spacing = 0;
  if (!(in >> nx >> ny >> x0 >> y0 >> spacing))
    throw FormatError("grid file '" + path + "': malformed header");
  std::vector<double> values;
  values.reserve(std::size_t(nx) * std::size_t(ny));
  double v;
  while (in >> v) values.push_back(v);
  if (int(values.size()) != nx * ny)
    throw FormatError("grid file '" + path + "': expected " + std::to_string(nx * ny) +
                      " samples, found " + std::to_string(values.size()));
  return GridField(nx, ny, {x0, y0}, spacing, std::move(values), lipschitz, floor);
}

inline std::unique_ptr<SizeField> make_size_field(const SizeFieldConfig& cfg) {
  double floor = cfg.get_or("floor", kDefaultFloor);
  if (cfg.kind == "constant")
    return std::make_unique<ConstantField>(cfg.get("value"));
  if (cfg.kind == "point")
    return std::make_unique<PointDistanceField>(
        Point{cfg.get_or("cx", 0), cfg.get_or("cy", 0)}, cfg.get_or("scale", 1), floor);
  if (cfg.kind == "circle")
    return std::make_unique<CircleDistanceField>(
        Point{cfg.get_or("cx", 0), cfg.get_or("cy", 0)}, cfg.get("r"),
        cfg.get_or("scale", 1), floor);
  if (cfg.kind == "ramp")
    return std::make_unique<RampField>(cfg.get("base"), cfg.get_or("gx", 0),
                                       cfg.get_or("gy", 0), floor);
  if (cfg.kind == "grid") {
    auto it = cfg.strings.find("file");
    if (it == cfg.strings.end())
      throw FormatError("grid size field requires file=<path>");
    return std::make_unique<GridField>(
        load_grid_field(it->second, cfg.get("lip"), cfg.get_or("floor", kGridFloor)));
  }
  throw FormatError("unknown size field kind '" + cfg.kind + "'");
}

inline std::unique_ptr<SizeField> make_size_field(const std::string& text) {
  return make_size_field(parse_field_config(text));
}

}  // namespace dk
