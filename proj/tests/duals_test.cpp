#include "diamondkite/duals.hpp"

#include <gtest/gtest.h>

#include <map>
#include <random>

#include "diamondkite/adapt.hpp"
#include "testutil.hpp"

using namespace dk;

namespace {

std::map<DualShape, long> shape_census(const DualMeshPair& d) {
  std::map<DualShape, long> census;
  for (int cls = 0; cls < 2; ++cls)
    for (const auto& f : d.faces[cls]) ++census[f.shape];
  return census;
}

}  // namespace

TEST(Duals, FreshPatchSplitsIntoTrianglesAndHexagons) {
  Mesh m = Mesh::initial_patch(3);
  DualMeshPair d = dual_meshes(m);
  // One mesh is the triangular lattice on the degree-six vertices (its
  // faces are the hexagons around them... seen from the other side), the
  // other the hexagonal tiling on the degree-three vertices.
  int origin_class = d.vertex_class[m.find_vertex(make_coord(0, 0, 0))];
  for (const auto& f : d.faces[1 - origin_class]) {
    EXPECT_EQ(f.shape, DualShape::Hexagon);
    EXPECT_EQ(m.vertex(f.center).neighbors.size(), 6u);
  }
  for (const auto& f : d.faces[origin_class]) {
    EXPECT_EQ(f.shape, DualShape::Triangle);
    EXPECT_EQ(m.vertex(f.center).neighbors.size(), 3u);
  }
  EXPECT_GT(d.faces[0].size(), 0u);
  EXPECT_GT(d.faces[1].size(), 0u);
  EXPECT_GT(d.dropped_boundary_cells, 0);
}

TEST(Duals, AllFourShapesAppearAfterTwoReplacements) {
  Mesh m = Mesh::initial_patch(3);
  m.apply_replacement({make_coord(0, 0, 0), 0});
  m.apply_replacement({make_coord(1, 1, 0), 0});
  DualMeshPair d = dual_meshes(m);
  auto census = shape_census(d);
  EXPECT_GT(census[DualShape::Triangle], 0);
  EXPECT_GT(census[DualShape::Hexagon], 0);
  EXPECT_GT(census[DualShape::Trapezoid], 0) << "degree-4 rim corners";
  EXPECT_GT(census[DualShape::Pentagon], 0) << "degree-5 shared corners";
}

TEST(Duals, EdgesJoinOneBipartitionClassPerMesh) {
  Mesh m = Mesh::initial_patch(2);
  m.apply_replacement({make_coord(0, 0, 0), 0});
  DualMeshPair d = dual_meshes(m);
  for (int cls = 0; cls < 2; ++cls)
    for (const auto& e : d.edges[cls]) {
      EXPECT_EQ(d.vertex_class[e[0]], cls);
      EXPECT_EQ(d.vertex_class[e[1]], cls);
    }
  // One diagonal of each class per face.
  EXPECT_EQ(d.edges[0].size() + d.edges[1].size(), 2u * std::size_t(m.face_count()));
}

TEST(Duals, ValidOnRandomMultiscaleMeshes) {
  // Shape inventory, orthogonal crossings, and strict interiority are all
  // asserted inside dual_meshes; any violation throws.
  std::mt19937_64 rng(501);
  for (int trial = 0; trial < 6; ++trial) {
    LowerSet set = dktest::random_lower_set(rng, 4, 6.0, 40);
    Mesh m = Mesh::replay(dktest::patch_radius_for(6.0), set);
    DualMeshPair d;
    ASSERT_NO_THROW(d = dual_meshes(m));
    auto census = shape_census(d);
    for (auto [shape, count] : census) EXPECT_GT(count, 0L);
  }
}

TEST(Duals, ValidOnAdaptedMesh) {
  std::mt19937_64 rng(503);
  Mesh m = Mesh::initial_patch(8);
  auto field = dktest::random_safe_field(rng, 8);
  refine_to_size(m, *field);
  ASSERT_NO_THROW(dual_meshes(m));
}
