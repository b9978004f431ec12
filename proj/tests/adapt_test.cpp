#include "diamondkite/adapt.hpp"

#include <gtest/gtest.h>

#include <random>

#include "diamondkite/checks.hpp"
#include "diamondkite/dkm_io.hpp"
#include "testutil.hpp"

using namespace dk;

namespace {

bool any_oversized(const Mesh& m, const SizeField& f) {
  for (FaceId id = 0; id < m.face_capacity(); ++id) {
    if (!m.face_alive(id)) continue;
    if (f.min_over_polygon(detail_adapt::face_polygon(m, id)) <
        side_length_of_level(m.face(id).level))
      return true;
  }
  return false;
}

long coarsenable_count(const Mesh& m, const SizeField& f) {
  long n = 0;
  for (VertexId v = 0; v < m.vertex_capacity(); ++v)
    if (m.vertex_alive(v) && is_coarsenable(m, v, f)) ++n;
  return n;
}

}  // namespace

TEST(RefineToSize, LargeConstantLeavesMeshUnchanged) {
  Mesh m = Mesh::initial_patch(3);
  std::string before = m.fingerprint();
  ConstantField f(1.0);  // side of every level-0 face is exactly 1
  AdaptReport rep = refine_to_size(m, f);
  EXPECT_EQ(rep.refine_steps, 0);
  EXPECT_EQ(m.fingerprint(), before);
}

TEST(RefineToSize, MidConstantReplacesEveryInteriorHexagonOnce) {
  // 3^(-1/2) < sigma < 1: level-0 faces are oversized, level-1 are not.
  Mesh fresh = Mesh::initial_patch(3);
  std::vector<LatticeCoord> replaceable;
  for (VertexId v = 0; v < fresh.vertex_capacity(); ++v) {
    if (!fresh.vertex_alive(v)) continue;
    const Vertex& vx = fresh.vertex(v);
    if (vx.neighbors.size() == 6 && vx.faces.size() == 6 && fresh.is_interior(v))
      replaceable.push_back(vx.pos);
  }

  Mesh m = Mesh::initial_patch(3);
  ConstantField f(0.8);
  AdaptOptions clamp;
  clamp.boundary = BoundaryMode::Clamp;
  AdaptReport rep = refine_to_size(m, f, clamp);
  EXPECT_EQ(std::size_t(rep.refine_steps), replaceable.size());
  EXPECT_GT(rep.skipped_boundary, 0);
  for (const auto& c : replaceable) EXPECT_TRUE(m.applied().contains({c, 0}));
  for (const auto& key : m.applied()) EXPECT_EQ(key.level, 0);
  EXPECT_TRUE(m.validate().empty());

  // Strict mode on the same field hits the rim.
  Mesh strict = Mesh::initial_patch(3);
  EXPECT_THROW(refine_to_size(strict, f), BoundaryViolation);
}

TEST(RefineToSize, NoOversizedAndNoCoarsenableAfterwards) {
  std::mt19937_64 rng(201);
  for (int trial = 0; trial < 10; ++trial) {
    int radius = 8;
    auto field = dktest::random_safe_field(rng, radius);
    Mesh m = Mesh::initial_patch(radius);
    AdaptReport rep = refine_to_size(m, *field);
    EXPECT_EQ(rep.skipped_boundary, 0);
    EXPECT_FALSE(any_oversized(m, *field));
    EXPECT_EQ(coarsenable_count(m, *field), 0);
    EXPECT_TRUE(m.validate().empty());
  }
}

TEST(RefineToSize, FifoAndLifoAgreeByteForByte) {
  std::mt19937_64 rng(211);
  for (int trial = 0; trial < 6; ++trial) {
    int radius = 8;
    auto field = dktest::random_safe_field(rng, radius);
    Mesh a = Mesh::initial_patch(radius);
    Mesh b = Mesh::initial_patch(radius);
    AdaptOptions fifo, lifo;
    lifo.order = QueueOrder::Lifo;
    refine_to_size(a, *field, fifo);
    refine_to_size(b, *field, lifo);
    EXPECT_EQ(serialize(a), serialize(b));
    EXPECT_EQ(a.fingerprint(), b.fingerprint());
  }
}

TEST(RefineToSize, LevelCapGuardsNonTermination) {
  Mesh m = Mesh::initial_patch(1);
  // Demands elements of side 3^-19 at the origin: beyond the level cap.
  PointDistanceField needle({0.0, 0.0}, 5.0, 8.6e-10);
  EXPECT_THROW(refine_to_size(m, needle), NonTermination);
}

TEST(RefineToSize, VertexSamplingIsCoarserOrEqual) {
  std::mt19937_64 rng(223);
  for (int trial = 0; trial < 5; ++trial) {
    int radius = 8;
    auto field = dktest::random_safe_field(rng, radius);
    Mesh exact = Mesh::initial_patch(radius);
    Mesh fast = Mesh::initial_patch(radius);
    refine_to_size(exact, *field);
    AdaptOptions opts;
    opts.vertex_sampling = true;
    refine_to_size(fast, *field, opts);
    // Corner sampling sees a larger minimum, so it refines no more than the
    // exact predicate.
    EXPECT_EQ(meet(fast.applied(), exact.applied()), fast.applied());
  }
}

TEST(Coarsenable, FieldConditionOnTopOfTopology) {
  Mesh m = Mesh::initial_patch(3);
  m.apply_replacement({make_coord(0, 0, 0), 0});
  VertexId c = m.find_vertex(make_coord(0, 0, 0));
  ASSERT_TRUE(m.is_coarsenable_topology(c));
  ConstantField huge(50.0);
  EXPECT_TRUE(is_coarsenable(m, c, huge));
  // The six synthetic kites after coarsening would have side 1.
  ConstantField small(0.9);
  EXPECT_FALSE(is_coarsenable(m, c, small));
}

TEST(CoarsenToSize, HugeSigmaReturnsToInitialPatch) {
  std::mt19937_64 rng(227);
  int radius = 8;
  auto field = dktest::random_safe_field(rng, radius);
  Mesh m = Mesh::initial_patch(radius);
  refine_to_size(m, *field);
  ConstantField huge(100.0);
  AdaptReport rep;
  coarsen_to_size(m, huge, rep);
  EXPECT_TRUE(m.applied().empty());
  EXPECT_EQ(m.fingerprint(), Mesh::initial_patch(radius).fingerprint());
}

TEST(Adapt, UnchangedFieldIsANoOp) {
  std::mt19937_64 rng(229);
  int radius = 8;
  auto field = dktest::random_safe_field(rng, radius);
  Mesh m = Mesh::initial_patch(radius);
  refine_to_size(m, *field);
  std::string bytes = serialize(m);
  AdaptReport rep = adapt(m, *field);
  EXPECT_EQ(rep.refine_steps, 0);
  EXPECT_EQ(rep.coarsen_steps, 0);
  EXPECT_EQ(serialize(m), bytes);
}

TEST(Adapt, EqualsFromScratchAndCountsLowerSetDiff) {
  std::mt19937_64 rng(233);
  int radius = 8;
  for (int trial = 0; trial < 10; ++trial) {
    auto old_field = dktest::random_safe_field(rng, radius);
    auto new_field = dktest::random_safe_field(rng, radius);
    Mesh m = Mesh::initial_patch(radius);
    refine_to_size(m, *old_field);
    LowerSet old_set = m.applied();

    AdaptReport rep = adapt(m, *new_field);

    Mesh scratch = Mesh::initial_patch(radius);
    refine_to_size(scratch, *new_field);
    EXPECT_EQ(serialize(m), serialize(scratch));
    EXPECT_EQ(m.fingerprint(), scratch.fingerprint());

    // Work accounting: steps equal the lower-set difference sizes exactly.
    const LowerSet& new_set = scratch.applied();
    long added = 0, removed = 0;
    for (const auto& k : new_set)
      if (!old_set.contains(k)) ++added;
    for (const auto& k : old_set)
      if (!new_set.contains(k)) ++removed;
    EXPECT_EQ(rep.refine_steps, added);
    EXPECT_EQ(rep.coarsen_steps, removed);
  }
}

TEST(Adapt, MovingFeatureSweepsCoarsenableBoundary) {
  // Translate a circular feature across the patch; after each move the
  // adapted mesh must equal the from-scratch refinement, with step counts
  // proportional to the element turnover (strictly below a full rebuild).
  int radius = 8;
  Mesh m = Mesh::initial_patch(radius);
  for (int step = 0; step <= 4; ++step) {
    double cx = -2.0 + step * 1.0;
    CircleDistanceField field({cx, 0.4}, 2.0, 0.6, 0.12);
    LowerSet old_set = m.applied();
    AdaptReport rep = adapt(m, field);
    Mesh scratch = Mesh::initial_patch(radius);
    refine_to_size(scratch, field);
    EXPECT_EQ(serialize(m), serialize(scratch)) << "offset " << cx;
    EXPECT_FALSE(any_oversized(m, field));
    EXPECT_EQ(coarsenable_count(m, field), 0);
    if (step > 0) {
      long rebuild_cost = long(old_set.size()) + long(m.applied().size());
      EXPECT_LT(rep.refine_steps + rep.coarsen_steps, rebuild_cost)
          << "incremental adaptation should beat coarsen-all + rebuild";
    }
  }
}

TEST(Adapt, QueueWorkIsLinearInMeshSize) {
  std::mt19937_64 rng(239);
  for (int trial = 0; trial < 5; ++trial) {
    int radius = 8;
    auto field = dktest::random_safe_field(rng, radius);
    Mesh m = Mesh::initial_patch(radius);
    AdaptReport rep = adapt(m, *field);
    EXPECT_LE(rep.queue_pushes, 8L * m.face_count())
        << "queue pushes should stay within a small factor of the result size";
  }
}
