// dkmesh: generate, adapt, analyze, and render diamond-kite meshes.

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "diamondkite/diamondkite.hpp"

namespace {

using json = nlohmann::ordered_json;

constexpr int kExitOk = 0;
constexpr int kExitInvariant = 1;
constexpr int kExitUsage = 2;
constexpr int kExitBoundary = 3;

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw dk::FormatError("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& data) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw dk::FormatError("cannot write '" + path + "'");
  out << data;
}

struct AdaptFlags {
  std::string boundary = "strict";
  std::string order = "fifo";
  bool vertex_sampling = false;

  void attach(CLI::App* cmd) {
    cmd->add_option("--boundary", boundary, "strict|clamp: fail or skip steps at the patch rim")
        ->check(CLI::IsMember({"strict", "clamp"}));
    cmd->add_option("--order", order, "fifo|lifo queue discipline")
        ->check(CLI::IsMember({"fifo", "lifo"}));
    cmd->add_flag("--vertex-sampling", vertex_sampling,
                  "test the size function at corners only (fast mode)");
  }
  dk::AdaptOptions options() const {
    dk::AdaptOptions o;
    o.boundary = boundary == "clamp" ? dk::BoundaryMode::Clamp : dk::BoundaryMode::Strict;
    o.order = order == "lifo" ? dk::QueueOrder::Lifo : dk::QueueOrder::Fifo;
    o.vertex_sampling = vertex_sampling;
    return o;
  }
};

json report_json(const dk::Mesh& mesh, const dk::AdaptReport& rep,
                 const dk::SizeField& field) {
  json j;
  j["field"] = field.describe();
  j["refine_steps"] = rep.refine_steps;
  j["coarsen_steps"] = rep.coarsen_steps;
  j["skipped_boundary"] = rep.skipped_boundary;
  j["queue_pushes"] = rep.queue_pushes;
  j["wall_ms"] = rep.wall_ms;
  j["vertices"] = mesh.vertex_count();
  j["edges"] = mesh.edge_count();
  j["faces"] = mesh.face_count();
  return j;
}

dk::RenderLayers parse_layers(const std::string& csv) {
  dk::RenderLayers layers;
  layers.faces = false;
  std::stringstream ss(csv);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item == "faces")
      layers.faces = true;
    else if (item == "coloring")
      layers.coloring = true;
    else if (item == "packing")
      layers.packing = true;
    else if (item == "duals")
      layers.duals = true;
    else
      throw dk::FormatError("unknown layer '" + item +
                            "' (expected faces, coloring, packing, duals)");
  }
  return layers;
}

int run_verify(const std::string& in_path, const std::string& size_arg) {
  dk::Mesh mesh = dk::parse_mesh(read_file(in_path));
  long failures = 0;
  auto suite = [&](const std::string& name, const std::vector<std::string>& bad) {
    if (bad.empty()) {
      std::cout << "[ok]   " << name << "\n";
    } else {
      failures += long(bad.size());
      std::cout << "[FAIL] " << name << " (" << bad.size() << " violations)\n";
      for (const auto& msg : bad) std::cout << "       " << msg << "\n";
    }
  };

  suite("structure (shapes, edges, Euler, lower-set closure, bipartite, orthodiagonal)",
        dk::check_structure(mesh));

  try {
    dk::CirclePacking packing = dk::build_packing(mesh);
    auto rep = dk::validate_packing(packing, mesh, mesh.face_count() <= 20000, 512);
    suite("circle packing identities", rep.violations);
  } catch (const dk::Error& e) {
    suite("circle packing identities", {e.what()});
  }

  try {
    dk::FaceColoring coloring = dk::three_color(mesh);
    suite("face 3-coloring", {});
    std::cout << "       classes used: " << coloring.classes_used() << "\n";
  } catch (const dk::Error& e) {
    suite("face 3-coloring", {e.what()});
  }

  try {
    dk::DualMeshPair duals = dk::dual_meshes(mesh);
    suite("dual well-centered meshes", {});
    std::cout << "       dual faces: " << duals.faces[0].size() << " + "
              << duals.faces[1].size() << ", dropped boundary cells: "
              << duals.dropped_boundary_cells << "\n";
  } catch (const dk::Error& e) {
    suite("dual well-centered meshes", {e.what()});
  }

  {
    auto rep = dk::check_centroid(mesh);
    std::vector<std::string> bad;
    for (dk::VertexId v : rep.defects)
      bad.push_back("centroid defect at " + mesh.vertex(v).pos.str());
    suite("neighbor centroid property", bad);
  }

  if (!size_arg.empty()) {
    auto field = dk::make_size_field(size_arg);
    std::vector<std::string> bad;
    for (dk::FaceId f = 0; f < mesh.face_capacity(); ++f) {
      if (!mesh.face_alive(f)) continue;
      auto poly = dk::detail_adapt::face_polygon(mesh, f);
      double side = dk::side_length_of_level(mesh.face(f).level);
      if (field->min_over_polygon(poly) < side)
        bad.push_back("face " + std::to_string(f) + " is oversized");
    }
    suite("no oversized faces", bad);
    bad.clear();
    for (dk::VertexId v = 0; v < mesh.vertex_capacity(); ++v)
      if (mesh.vertex_alive(v) && dk::is_coarsenable(mesh, v, *field))
        bad.push_back("vertex " + mesh.vertex(v).pos.str() + " is still coarsenable");
    suite("mesh is coarsest (no coarsenable vertex)", bad);
  }

  std::cout << (failures == 0 ? "verify: all checks passed\n"
                              : "verify: " + std::to_string(failures) + " violations\n");
  return failures == 0 ? kExitOk : kExitInvariant;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"generate, adapt, analyze, and render diamond-kite meshes"};
  app.require_subcommand(1);

  // generate
  auto* gen = app.add_subcommand("generate", "initial patch refined to a size function");
  int gen_radius = 4;
  std::string gen_size, gen_out;
  AdaptFlags gen_flags;
  gen->add_option("--radius", gen_radius, "patch radius in hexagon rings")->required();
  gen->add_option("--size", gen_size, "size field, kind:key=val,...")->required();
  gen->add_option("-o,--output", gen_out, "output .dkm path")->required();
  gen_flags.attach(gen);

  // adapt
  auto* adp = app.add_subcommand("adapt", "re-adapt an existing mesh to a new size function");
  std::string adp_in, adp_size, adp_out, adp_report;
  AdaptFlags adp_flags;
  adp->add_option("-i,--input", adp_in, "input .dkm path")->required();
  adp->add_option("--size", adp_size, "size field, kind:key=val,...")->required();
  adp->add_option("-o,--output", adp_out, "output .dkm path")->required();
  adp->add_option("--report", adp_report, "write a JSON adaptation report here");
  adp_flags.attach(adp);

  // render
  auto* ren = app.add_subcommand("render", "render a mesh and derived layers to SVG");
  std::string ren_in, ren_layers = "faces", ren_out;
  int ren_precision = 6;
  ren->add_option("-i,--input", ren_in, "input .dkm path")->required();
  ren->add_option("--layers", ren_layers, "comma list: faces,coloring,packing,duals");
  ren->add_option("-o,--output", ren_out, "output .svg path")->required();
  ren->add_option("--precision", ren_precision, "coordinate decimals")->default_val(6);

  // stats
  auto* sta = app.add_subcommand("stats", "mesh statistics and size-ratio sampling");
  std::string sta_in, sta_size, sta_out;
  int sta_samples = 200;
  std::uint64_t sta_seed = 7;
  sta->add_option("-i,--input", sta_in, "input .dkm path")->required();
  sta->add_option("--size", sta_size, "size field the mesh was adapted to")->required();
  sta->add_option("--samples", sta_samples, "number of sample points");
  sta->add_option("--seed", sta_seed, "sampling seed");
  sta->add_option("-o,--output", sta_out, "output .json path (stdout if omitted)");

  // lattice
  auto* lat = app.add_subcommand("lattice", "meet/join of two meshes over one patch");
  std::string lat_op, lat_a, lat_b, lat_out;
  lat->add_option("op", lat_op, "meet|join")->required()->check(CLI::IsMember({"meet", "join"}));
  lat->add_option("-a", lat_a, "first .dkm path")->required();
  lat->add_option("-b", lat_b, "second .dkm path")->required();
  lat->add_option("-o,--output", lat_out, "output .dkm path")->required();

  // verify
  auto* ver = app.add_subcommand("verify", "run every invariant suite, nonzero exit on violation");
  std::string ver_in, ver_size;
  ver->add_option("-i,--input", ver_in, "input .dkm path")->required();
  ver->add_option("--size", ver_size, "also check conformance to this size field");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (gen->parsed()) {
      auto field = dk::make_size_field(gen_size);
      dk::Mesh mesh = dk::Mesh::initial_patch(gen_radius);
      dk::AdaptReport rep = dk::refine_to_size(mesh, *field, gen_flags.options());
      write_file(gen_out, dk::serialize(mesh));
      std::cout << "generated " << gen_out << ": " << mesh.face_count() << " faces, "
                << rep.refine_steps << " replacements";
      if (rep.skipped_boundary) std::cout << ", " << rep.skipped_boundary << " skipped at rim";
      std::cout << "\n";
    } else if (adp->parsed()) {
      auto field = dk::make_size_field(adp_size);
      dk::Mesh mesh = dk::parse_mesh(read_file(adp_in));
      dk::AdaptReport rep = dk::adapt(mesh, *field, adp_flags.options());
      write_file(adp_out, dk::serialize(mesh));
      if (!adp_report.empty())
        write_file(adp_report, report_json(mesh, rep, *field).dump(2) + "\n");
      std::cout << "adapted " << adp_out << ": +" << rep.refine_steps << " / -"
                << rep.coarsen_steps << " steps, " << mesh.face_count() << " faces\n";
    } else if (ren->parsed()) {
      dk::Mesh mesh = dk::parse_mesh(read_file(ren_in));
      write_file(ren_out, dk::render_svg(mesh, parse_layers(ren_layers), ren_precision));
      std::cout << "rendered " << ren_out << "\n";
    } else if (sta->parsed()) {
      auto field = dk::make_size_field(sta_size);
      dk::Mesh mesh = dk::parse_mesh(read_file(sta_in));
      dk::MeshStats st = dk::stats(mesh, *field, sta_samples, sta_seed);
      json j;
      j["field"] = field->describe();
      j["vertices"] = st.vertices;
      j["edges"] = st.edges;
      j["faces"] = st.faces;
      j["total_edge_length"] = st.total_edge_length;
      j["total_area"] = st.total_area;
      j["total_perimeter"] = st.total_perimeter;
      j["min_angle"] = st.min_angle;
      j["max_angle"] = st.max_angle;
      json hist;
      for (auto [level, n] : st.face_levels) hist[std::to_string(level)] = n;
      j["face_levels"] = hist;
      json ehist;
      for (auto [level, n] : st.edge_levels) ehist[std::to_string(level)] = n;
      j["edge_levels"] = ehist;
      j["samples_requested"] = st.samples_requested;
      j["samples_located"] = st.samples_located;
      j["ratio_min"] = st.ratio_min;
      j["ratio_max"] = st.ratio_max;
      j["ratio_mean"] = st.ratio_mean;
      std::string text = j.dump(2) + "\n";
      if (sta_out.empty())
        std::cout << text;
      else
        write_file(sta_out, text);
    } else if (lat->parsed()) {
      dk::DkmFile fa = dk::parse_dkm(read_file(lat_a));
      dk::DkmFile fb = dk::parse_dkm(read_file(lat_b));
      if (fa.radius != fb.radius)
        throw dk::FormatError("patch radii differ: " + std::to_string(fa.radius) +
                              " vs " + std::to_string(fb.radius));
      dk::LowerSet result =
          lat_op == "meet" ? dk::meet(fa.keys, fb.keys) : dk::join(fa.keys, fb.keys);
      write_file(lat_out, dk::serialize(fa.radius, result));
      std::cout << lat_op << " -> " << lat_out << ": " << result.size() << " keys\n";
    } else if (ver->parsed()) {
      return run_verify(ver_in, ver_size);
    }
  } catch (const dk::FormatError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const dk::BoundaryViolation& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitBoundary;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInvariant;
  }
  return kExitOk;
}
