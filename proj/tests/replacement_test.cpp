#include "diamondkite/replacement.hpp"

#include <gtest/gtest.h>

#include <random>

#include "testutil.hpp"

using namespace dk;

namespace {
LatticeCoord origin() { return make_coord(0, 0, 0); }
}  // namespace

TEST(IsCenter, BaseCases) {
  EXPECT_TRUE(is_center(origin(), 0));
  EXPECT_FALSE(is_center(make_coord(1, 0, 0), 0));
  EXPECT_TRUE(is_center(make_coord(1, 0, 0), 1));
  // The coarse center lattice (1+z)Z[z] has normalized k <= -1.
  EXPECT_TRUE(is_center(make_coord(1, 1, 0), 0));  // 1+z reduces to (1,0,-1)
  EXPECT_THROW(is_center(origin(), -1), PreconditionViolation);
}

TEST(IsCenter, PersistsToFinerLevels) {
  std::mt19937_64 rng(5);
  std::uniform_int_distribution<Int> ab(-30, 30);
  std::uniform_int_distribution<int> kk(-2, 6);
  for (int i = 0; i < 2000; ++i) {
    LatticeCoord p = make_coord(ab(rng), ab(rng), kk(rng));
    for (int j = 0; j < 8; ++j)
      if (is_center(p, j)) EXPECT_TRUE(is_center(p, j + 1));
  }
}

TEST(Prerequisites, BaseCases) {
  EXPECT_TRUE(prerequisites({origin(), 0}).empty());

  auto p1 = prerequisites({origin(), 1});
  ASSERT_EQ(p1.size(), 1u);
  EXPECT_EQ(p1[0], (ReplacementKey{origin(), 0}));

  auto p3 = prerequisites({make_coord(1, 0, 0), 1});
  ASSERT_EQ(p3.size(), 3u);
  for (const auto& q : p3) {
    EXPECT_EQ(q.level, 0);
    EXPECT_TRUE(is_center(q.center, 0));
    // Equally spaced around p at distance 3^(-0/2) = 1.
    EXPECT_EQ(distance2(q.center, make_coord(1, 0, 0)), side2_of_level(0));
  }
}

TEST(Prerequisites, CountAndLevelStructure) {
  std::mt19937_64 rng(17);
  for (int i = 0; i < 500; ++i) {
    ReplacementKey key = dktest::random_key(rng, 6, 12);
    auto pre = prerequisites(key);
    if (key.level == 0) {
      EXPECT_TRUE(pre.empty());
      continue;
    }
    EXPECT_TRUE(pre.size() == 1 || pre.size() == 3);
    for (const auto& q : pre) {
      EXPECT_EQ(q.level, key.level - 1) << "levels strictly decrease (acyclic)";
      EXPECT_TRUE(is_valid_key(q));
    }
    if (pre.size() == 3) {
      // 120 degrees apart at the coarser spacing.
      EXPECT_EQ(distance2(pre[0].center, pre[1].center),
                distance2(pre[1].center, pre[2].center));
      for (const auto& q : pre)
        EXPECT_EQ(distance2(q.center, key.center), side2_of_level(key.level - 1));
    }
  }
}

TEST(Prerequisites, InvalidKeyRejected) {
  EXPECT_THROW(prerequisites({make_coord(1, 0, 0), 0}), PreconditionViolation);
}

TEST(CloseDown, BaseCases) {
  EXPECT_TRUE(close_down({}).empty());

  LowerSet s1 = close_down({ReplacementKey{origin(), 1}});
  EXPECT_EQ(s1.size(), 2u);
  EXPECT_TRUE(s1.contains({origin(), 0}));
  EXPECT_TRUE(s1.contains({origin(), 1}));

  LowerSet s2 = close_down({ReplacementKey{make_coord(1, 0, 0), 1}});
  EXPECT_EQ(s2.size(), 4u);
}

TEST(CloseDown, Idempotent) {
  std::mt19937_64 rng(23);
  for (int i = 0; i < 50; ++i) {
    LowerSet s = dktest::random_lower_set(rng, 4, 12.0, 40);
    EXPECT_TRUE(s.is_downward_closed());
    std::vector<ReplacementKey> keys(s.begin(), s.end());
    EXPECT_EQ(close_down(keys), s);
  }
}

TEST(LowerSet, InsertRequiresClosure) {
  LowerSet s;
  EXPECT_THROW(s.insert({origin(), 1}), PreconditionViolation);
  s.insert({origin(), 0});
  EXPECT_NO_THROW(s.insert({origin(), 1}));
  EXPECT_TRUE(s.is_maximal({origin(), 1}));
  EXPECT_FALSE(s.is_maximal({origin(), 0}));
}

TEST(Lattice, MeetJoinBaseCases) {
  LowerSet empty;
  LowerSet one = close_down({ReplacementKey{origin(), 0}});
  EXPECT_EQ(meet(one, empty), empty);
  EXPECT_EQ(join(one, empty), one);
}

TEST(Lattice, LawsOnRandomLowerSets) {
  std::mt19937_64 rng(29);
  for (int i = 0; i < 60; ++i) {
    LowerSet a = dktest::random_lower_set(rng, 4, 12.0, 50);
    LowerSet b = dktest::random_lower_set(rng, 4, 12.0, 50);
    LowerSet c = dktest::random_lower_set(rng, 4, 12.0, 50);
    // Idempotence, commutativity, associativity, absorption, distributivity.
    EXPECT_EQ(meet(a, a), a);
    EXPECT_EQ(join(a, a), a);
    EXPECT_EQ(meet(a, b), meet(b, a));
    EXPECT_EQ(join(a, b), join(b, a));
    EXPECT_EQ(meet(a, meet(b, c)), meet(meet(a, b), c));
    EXPECT_EQ(join(a, join(b, c)), join(join(a, b), c));
    EXPECT_EQ(meet(a, join(a, b)), a);
    EXPECT_EQ(join(a, meet(a, b)), a);
    EXPECT_EQ(meet(a, join(b, c)), join(meet(a, b), meet(a, c)));
    EXPECT_EQ(join(a, meet(b, c)), meet(join(a, b), join(a, c)));
    // Containment.
    for (const auto& k : meet(a, b)) {
      EXPECT_TRUE(a.contains(k));
      EXPECT_TRUE(b.contains(k));
    }
    for (const auto& k : a) EXPECT_TRUE(join(a, b).contains(k));
  }
}

TEST(Linearize, PrerequisitesPrecede) {
  EXPECT_TRUE(linearize(LowerSet{}).empty());

  LowerSet s = close_down({ReplacementKey{origin(), 1}});
  auto order = linearize(s);
  ASSERT_EQ(order.size(), 2u);
  EXPECT_EQ(order[0], (ReplacementKey{origin(), 0}));
  EXPECT_EQ(order[1], (ReplacementKey{origin(), 1}));

  std::mt19937_64 rng(31);
  for (int i = 0; i < 40; ++i) {
    LowerSet set = dktest::random_lower_set(rng, 4, 10.0, 40);
    auto lin = linearize(set);
    ASSERT_EQ(lin.size(), set.size());
    for (std::size_t at = 0; at < lin.size(); ++at)
      for (const auto& p : prerequisites(lin[at])) {
        auto it = std::find(lin.begin(), lin.begin() + long(at), p);
        EXPECT_NE(it, lin.begin() + long(at)) << "prerequisite must precede";
      }
  }
}
