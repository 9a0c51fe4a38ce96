#include <set>
#include <sstream>

#include <gtest/gtest.h>

#include "pathlet/error.hpp"
#include "pathlet/synthetic.hpp"

namespace pathlet {
namespace {

TEST(SyntheticWorld, GridHasExpectedShapeAndNames) {
  SyntheticWorldSpec spec;
  spec.grid_width = 6;
  spec.grid_height = 6;
  const auto w = generate_world(spec);
  EXPECT_EQ(w.network.node_count(), 49u);
  EXPECT_EQ(w.network.edge_count(), 2u * 6 * 6 + 6 + 6);
  EXPECT_TRUE(w.network.find_node("n0_0"));
  EXPECT_TRUE(w.network.find_node("n6_6"));
  EXPECT_TRUE(w.network.find_segment("h0_0"));
  EXPECT_TRUE(w.network.find_segment("v6_5"));
  EXPECT_EQ(w.trajectories.size(), 200u);
  EXPECT_EQ(w.trajectories.front().id, "t1");
}

// Oracle: every emitted trajectory survives re-ingestion, stays within the
// length bounds and never revisits an intersection.
TEST(SyntheticWorld, TrajectoriesAreContiguousSelfAvoidingAndBounded) {
  for (double bias : {0.0, 0.9}) {
    SyntheticWorldSpec spec;
    spec.n_trajectories = 100;
    spec.walk_length_range = {3, 8};
    spec.straight_bias = bias;
    spec.seed = 21;
    const auto w = generate_world(spec);
    std::ostringstream out;
    write_trajectories(out, w.network, w.trajectories);
    std::istringstream in(out.str());
    const auto again = parse_trajectories(in, w.network);
    ASSERT_EQ(again.size(), 100u);
    for (const auto& t : w.trajectories) {
      EXPECT_GE(t.edges.size(), 3u);
      EXPECT_LE(t.edges.size(), 8u);
      const auto nodes = w.network.walk_nodes(t.edges);
      ASSERT_TRUE(nodes);
      EXPECT_EQ(std::set<NodeId>(nodes->begin(), nodes->end()).size(),
                nodes->size());
    }
  }
}

TEST(SyntheticWorld, SeedDeterminesTheWorld) {
  SyntheticWorldSpec spec;
  spec.seed = 3;
  const auto a = generate_world(spec);
  const auto b = generate_world(spec);
  spec.seed = 4;
  const auto c = generate_world(spec);
  ASSERT_EQ(a.trajectories.size(), b.trajectories.size());
  bool differs = false;
  for (std::size_t i = 0; i < a.trajectories.size(); ++i) {
    EXPECT_EQ(a.trajectories[i].edges, b.trajectories[i].edges);
    differs |= a.trajectories[i].edges != c.trajectories[i].edges;
  }
  EXPECT_TRUE(differs);
}

TEST(SyntheticWorld, StraightBiasProducesStraighterWalks) {
  auto turns = [](double bias) {
    SyntheticWorldSpec spec;
    spec.straight_bias = bias;
    spec.seed = 8;
    const auto w = generate_world(spec);
    int count = 0;
    for (const auto& t : w.trajectories) {
      for (std::size_t i = 1; i < t.edges.size(); ++i) {
        count += w.network.segment(t.edges[i]).name[0] !=
                 w.network.segment(t.edges[i - 1]).name[0];
      }
    }
    return count;
  };
  EXPECT_LT(turns(0.9), turns(0.0) / 2);
}

TEST(SyntheticWorld, RejectsBadSpecs) {
  SyntheticWorldSpec spec;
  spec.grid_width = 0;
  EXPECT_THROW(generate_world(spec), Error);
  spec = SyntheticWorldSpec{};
  spec.walk_length_range = {5, 3};
  EXPECT_THROW(validate(spec), Error);
  spec = SyntheticWorldSpec{};
  spec.straight_bias = 1.5;
  EXPECT_THROW(validate(spec), Error);
  // A 1x1 grid has no self-avoiding walk of 9 segments.
  spec = SyntheticWorldSpec{};
  spec.grid_width = 1;
  spec.grid_height = 1;
  spec.walk_length_range = {9, 9};
  EXPECT_THROW(generate_world(spec), Error);
}

TEST(Split, DeterministicDisjointAndSized) {
  SyntheticWorldSpec spec;
  spec.n_trajectories = 100;
  const auto w = generate_world(spec);
  const auto a = split_trajectories(w.trajectories, 0.7, 5);
  const auto b = split_trajectories(w.trajectories, 0.7, 5);
  EXPECT_EQ(a.train.size(), 70u);
  EXPECT_EQ(a.test.size(), 30u);
  std::set<std::string> ids;
  for (const auto& t : a.train) ids.insert(t.id);
  for (const auto& t : a.test) EXPECT_EQ(ids.count(t.id), 0u);
  for (std::size_t i = 0; i < a.train.size(); ++i) {
    EXPECT_EQ(a.train[i].id, b.train[i].id);
  }
  const auto c = split_trajectories(w.trajectories, 0.7, 6);
  std::set<std::string> other;
  for (const auto& t : c.train) other.insert(t.id);
  EXPECT_NE(ids, other);
}

TEST(Split, EmptySideIsAnError) {
  std::vector<TrajectoryPath> two{{"a", {0}}, {"b", {0}}};
  try {
    split_trajectories(two, 0.1, 1);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kValidation);
  }
  EXPECT_THROW(split_trajectories(two, 1.0, 1), Error);
}

TEST(StableHash, IsStableAcrossCalls) {
  EXPECT_EQ(stable_hash("t1", 0), stable_hash("t1", 0));
  EXPECT_NE(stable_hash("t1", 0), stable_hash("t1", 1));
  EXPECT_NE(stable_hash("t1", 0), stable_hash("t2", 0));
}

}  // namespace
}  // namespace pathlet
