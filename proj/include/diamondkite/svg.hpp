#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <string>
#include <vector>

#include "diamondkite/adapt.hpp"
#include "diamondkite/coloring.hpp"
#include "diamondkite/duals.hpp"
#include "diamondkite/mesh.hpp"
#include "diamondkite/packing.hpp"

namespace dk {

struct RenderLayers {
  bool faces = true;
  bool coloring = false;
  bool packing = false;
  bool duals = false;
};

namespace detail_svg {

inline std::string fmt(double v, int precision) {
  if (std::fabs(v) < 0.5 * std::pow(10.0, -precision)) v = 0.0;
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", precision, v);
  return buf;
}

}  // namespace detail_svg

/// Deterministic SVG 1.1 rendering. Elements are emitted in a canonical
/// geometric order so equal meshes produce identical bytes. The y axis is
/// flipped to the screen convention: plane point (x, y) is drawn at (x, -y).
inline std::string render_svg(const Mesh& m, const RenderLayers& layers = {},
                              int precision = 6) {
  auto pt = [&](const LatticeCoord& c) {
    auto xy = to_cartesian(c);
    return std::pair<double, double>(xy[0], -xy[1]);
  };

  double x0 = 0, x1 = 0, y0 = 0, y1 = 0;
  bool first = true;
  int finest = 0;
  for (VertexId v = 0; v < m.vertex_capacity(); ++v) {
    if (!m.vertex_alive(v)) continue;
    auto [x, y] = pt(m.vertex(v).pos);
    if (first) {
      x0 = x1 = x;
      y0 = y1 = y;
      first = false;
    }
    x0 = std::min(x0, x);
    x1 = std::max(x1, x);
    y0 = std::min(y0, y);
    y1 = std::max(y1, y);
  }
  for (FaceId f = 0; f < m.face_capacity(); ++f)
    if (m.face_alive(f)) finest = std::max(finest, int(m.face(f).level));
  double margin = 1.0;
  x0 -= margin;
  y0 -= margin;
  x1 += margin;
  y1 += margin;
  double stroke = std::clamp(0.3 * side_length_of_level(finest), 1e-4, 0.03);

  std::ostringstream out;
  auto num = [&](double v) { return detail_svg::fmt(v, precision); };
  out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  out << "<!-- y axis flipped: plane point (x,y) is drawn at (x,-y) -->\n";
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"900\" "
         "height=\"900\" viewBox=\""
      << num(x0) << " " << num(y0) << " " << num(x1 - x0) << " " << num(y1 - y0)
      << "\">\n";

  if (layers.faces || layers.coloring) {
    FaceColoring coloring;
    if (layers.coloring) coloring = three_color(m);
    static const char* kPalette[3] = {"#66c2a5", "#fc8d62", "#8da0cb"};
    std::vector<std::pair<std::string, std::string>> polys;  // sort key, element
    for (FaceId f = 0; f < m.face_capacity(); ++f) {
      if (!m.face_alive(f)) continue;
      auto ps = m.face_positions(f);
      std::string points;
      for (int i = 0; i < 4; ++i) {
        auto [x, y] = pt(ps[i]);
        points += num(x) + "," + num(y);
        if (i < 3) points += " ";
      }
      const char* fill = layers.coloring ? kPalette[coloring.color[f]] : "#f2ead9";
      std::string el = "  <polygon points=\"" + points + "\" fill=\"" +
                       std::string(fill) + "\" stroke=\"#403830\" stroke-width=\"" +
                       num(stroke) + "\"/>\n";
      std::string key = std::to_string(m.face(f).level) + "|" + ps[0].str() + ps[1].str();
      polys.emplace_back(key, el);
    }
    std::sort(polys.begin(), polys.end());
    out << " <g id=\"faces\">\n";
    for (auto& [k, el] : polys) out << el;
    out << " </g>\n";
  }

  if (layers.duals) {
    DualMeshPair duals = dual_meshes(m);
    static const char* kDualColor[2] = {"#d62728", "#1f77b4"};
    static const char* kDualName[2] = {"dual-red", "dual-blue"};
    for (int cls = 0; cls < 2; ++cls) {
      std::vector<std::string> lines;
      for (const auto& e : duals.edges[cls]) {
        auto [xa, ya] = pt(m.vertex(e[0]).pos);
        auto [xb, yb] = pt(m.vertex(e[1]).pos);
        lines.push_back("  <line x1=\"" + num(xa) + "\" y1=\"" + num(ya) + "\" x2=\"" +
                        num(xb) + "\" y2=\"" + num(yb) + "\"/>\n");
      }
      std::sort(lines.begin(), lines.end());
      out << " <g id=\"" << kDualName[cls] << "\" stroke=\"" << kDualColor[cls]
          << "\" stroke-width=\"" << num(1.5 * stroke) << "\">\n";
      for (auto& l : lines) out << l;
      out << " </g>\n";
    }
  }

  if (layers.packing) {
    CirclePacking packing = build_packing(m);
    std::vector<std::string> circles;
    for (VertexId v = 0; v < m.vertex_capacity(); ++v) {
      if (!m.vertex_alive(v) || !packing.present[v]) continue;
      auto [x, y] = pt(m.vertex(v).pos);
      circles.push_back("  <circle cx=\"" + num(x) + "\" cy=\"" + num(y) + "\" r=\"" +
                        num(packing.radius(v)) + "\"/>\n");
    }
    std::sort(circles.begin(), circles.end());
    out << " <g id=\"packing\" fill=\"none\" stroke=\"#7a3fb3\" stroke-width=\""
        << num(stroke) << "\">\n";
    for (auto& c : circles) out << c;
    out << " </g>\n";
  }

  out << "</svg>\n";
  return out.str();
}

}  // namespace dk
