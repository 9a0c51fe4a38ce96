#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "fixtures.hpp"
#include "oracles.hpp"
#include "pathlet/error.hpp"
#include "pathlet/merge_env.hpp"
#include "pathlet/synthetic.hpp"

namespace pathlet {
namespace {

using testing::load_example1;

EnvConfig toy_config() {
  EnvConfig c;
  c.k = 5;
  c.max_loss = 0.25;
  c.mu_threshold = 0.5;
  c.rng_seed = 1;
  return c;
}

TEST(MergeEnvironment, ResetReportsInitialState) {
  const auto ex = load_example1();
  MergeEnvironment env(toy_config(), ex.graph);
  const EnvState s = env.reset();
  EXPECT_DOUBLE_EQ(s.size, 9.0);
  EXPECT_DOUBLE_EQ(s.phi, 19.0 / 6.0);
  EXPECT_DOUBLE_EQ(s.loss, 0.0);
  EXPECT_DOUBLE_EQ(s.mu_bar, 1.0);
  EXPECT_FALSE(env.done());
  EXPECT_GE(env.current(), 0);
  const auto f = env.features();
  ASSERT_EQ(f.size(), 4u);
  EXPECT_DOUBLE_EQ(f[0], 1.0);
  EXPECT_DOUBLE_EQ(f[1], 1.0);
}

TEST(MergeEnvironment, EligibleNeighborsOrderedByWeightThenId) {
  const auto ex = load_example1();
  MergeEnvironment env(toy_config(), ex.graph);
  env.reset();
  EXPECT_EQ(env.eligible_neighbors(ex.rho("3")),
            (std::vector<PathletId>{ex.rho("4"), ex.rho("2"), ex.rho("1")}));
  EXPECT_EQ(env.eligible_neighbors(ex.rho("8")),
            (std::vector<PathletId>{ex.rho("5"), ex.rho("9"), ex.rho("6")}));
}

TEST(MergeEnvironment, EnhancedStateCarriesNeighborWeights) {
  const auto ex = load_example1();
  EnvConfig c = toy_config();
  c.state_mode = StateMode::kEnhanced;
  c.n_max_neighbors = 4;
  MergeEnvironment env(c, ex.graph);
  env.reset();
  env.force_current(ex.rho("8"));
  const EnvState s = env.observation();
  EXPECT_DOUBLE_EQ(s.current_weight, 0.5);
  ASSERT_EQ(s.neighbor_weights.size(), 4u);
  EXPECT_DOUBLE_EQ(s.neighbor_weights[0], 2.0 / 6.0);
  EXPECT_DOUBLE_EQ(s.neighbor_weights[1], 2.0 / 6.0);
  EXPECT_DOUBLE_EQ(s.neighbor_weights[2], 1.0 / 6.0);
  EXPECT_DOUBLE_EQ(s.neighbor_weights[3], 0.0);
  EXPECT_EQ(env.feature_dim(), 4 + 1 + 4);
  EXPECT_EQ(env.features().size(), 9u);
}

TEST(MergeEnvironment, UnweightedVariantGivesUnitWeights) {
  const auto ex = load_example1();
  EnvConfig c = toy_config();
  c.state_mode = StateMode::kEnhanced;
  c.variant = Variant::kUnweighted;
  c.n_max_neighbors = 4;
  MergeEnvironment env(c, ex.graph);
  env.reset();
  env.force_current(ex.rho("8"));
  const EnvState s = env.observation();
  EXPECT_DOUBLE_EQ(s.current_weight, 1.0);
  EXPECT_DOUBLE_EQ(s.neighbor_weights[0], 1.0);
  EXPECT_DOUBLE_EQ(s.neighbor_weights[2], 1.0);
  EXPECT_DOUBLE_EQ(s.neighbor_weights[3], 0.0);
}

TEST(MergeEnvironment, MergeStepUpdatesMetricsAndReward) {
  const auto ex = load_example1();
  MergeEnvironment env(toy_config(), ex.graph);
  env.reset();
  env.force_current(ex.rho("5"));
  const StepResult r = env.step(1);  // rho8 is the only eligible neighbor
  ASSERT_TRUE(r.info.merged_id);
  EXPECT_TRUE(r.info.action_was_valid);
  EXPECT_FALSE(r.done);
  EXPECT_DOUBLE_EQ(r.observation.size, 8.0);
  EXPECT_DOUBLE_EQ(r.observation.phi, 16.0 / 6.0);
  EXPECT_DOUBLE_EQ(r.observation.mu_bar, 17.0 / 18.0);
  // Linear reward with equal alphas on normalized inputs.
  const double expected =
      0.25 * (1.0 / 9.0) + 0.25 * (3.0 / 19.0) - 0.25 * (1.0 / 18.0);
  EXPECT_NEAR(r.reward, expected, 1e-12);
  EXPECT_EQ(env.current(), *r.info.merged_id);
}

TEST(MergeEnvironment, InvalidActionsDegradeToKeep) {
  const auto ex = load_example1();
  MergeEnvironment env(toy_config(), ex.graph);
  env.reset();
  env.force_current(ex.rho("1"));  // one eligible neighbor (rho3)
  const StepResult r = env.step(5);
  EXPECT_FALSE(r.info.action_was_valid);
  EXPECT_FALSE(r.info.merged_id);
  EXPECT_DOUBLE_EQ(r.observation.size, 9.0);
  EXPECT_TRUE(env.graph().processed(ex.rho("1")));
  EXPECT_EQ(env.valid_actions()[0], true);
}

TEST(MergeEnvironment, RejectsOutOfRangeActionsAndStepsAfterDone) {
  const auto ex = load_example1();
  MergeEnvironment env(toy_config(), ex.graph);
  env.reset();
  EXPECT_THROW(env.step(-1), Error);
  EXPECT_THROW(env.step(env.action_count()), Error);
  while (!env.done()) env.step(0);
  EXPECT_EQ(env.termination(), Termination::kExhausted);
  EXPECT_EQ(env.steps_taken(), 9);
  try {
    env.step(0);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kUsage);
  }
}

TEST(MergeEnvironment, KOfOneForbidsEveryMerge) {
  const auto ex = load_example1();
  EnvConfig c = toy_config();
  c.k = 1;
  MergeEnvironment env(c, ex.graph);
  env.reset();
  std::mt19937_64 rng(3);
  while (!env.done()) {
    const StepResult r = env.step(1 + rng() % c.n_max_neighbors);
    EXPECT_FALSE(r.info.merged_id);
  }
  EXPECT_EQ(env.graph().live_count(), 9u);
  EXPECT_EQ(env.termination(), Termination::kExhausted);
}

TEST(MergeEnvironment, MuThresholdEndsTheEpisode) {
  const auto ex = load_example1();
  EnvConfig c = toy_config();
  c.mu_threshold = 0.95;
  MergeEnvironment env(c, ex.graph);
  env.reset();
  env.force_current(ex.rho("5"));
  const StepResult r = env.step(1);  // mu_bar drops to 17/18 < 0.95
  EXPECT_TRUE(r.done);
  EXPECT_EQ(r.info.termination_reason, Termination::kMuBelow);
}

TEST(MergeEnvironment, LossIsCheckedBeforeRepresentability) {
  const auto ex = load_example1();
  EnvConfig c = toy_config();
  c.variant = Variant::kNoRepresentability;
  c.max_loss = 0.1;
  c.mu_threshold = 0.99;
  MergeEnvironment env(c, ex.graph);
  env.reset();
  env.force_current(ex.rho("5"));
  const StepResult r = env.step(1);  // kills t6: loss 1/6 > 0.1
  EXPECT_DOUBLE_EQ(r.observation.loss, 1.0 / 6.0);
  EXPECT_EQ(r.info.termination_reason, Termination::kLossExceeded);
}

TEST(MergeEnvironment, NoRepresentabilityKeepsSurvivorsWhole) {
  const auto ex = load_example1();
  EnvConfig c = toy_config();
  c.variant = Variant::kNoRepresentability;
  c.max_loss = 1.0;
  MergeEnvironment env(c, ex.graph);
  env.reset(9);
  std::mt19937_64 rng(4);
  while (!env.done()) {
    env.step(rng() % env.action_count());
    if (env.graph().trajectories().size() > 0 && env.observation().loss < 1.0) {
      EXPECT_DOUBLE_EQ(env.observation().mu_bar, 1.0);
    }
  }
}

TEST(MergeEnvironment, EmptyTrajectorySetIsWellDefined) {
  auto net = testing::make_network({{{"a", "x", "y"}}, {{"b", "y", "z"}}});
  std::vector<TrajectoryPath> none;
  auto g = std::make_shared<PathletGraph>(PathletGraph::build(net, none));
  MergeEnvironment env(toy_config(), g);
  const EnvState s = env.reset();
  EXPECT_DOUBLE_EQ(s.phi, 0.0);
  EXPECT_DOUBLE_EQ(s.loss, 0.0);
  EXPECT_DOUBLE_EQ(s.mu_bar, 1.0);
  const auto f = env.features();
  for (double v : f) EXPECT_TRUE(std::isfinite(v));
  env.step(1);
  EXPECT_DOUBLE_EQ(env.graph().weight(env.graph().live_pathlets()[0]), 0.0);
}

TEST(MergeEnvironment, EmptyGraphCannotReset) {
  auto net = std::make_shared<RoadNetwork>();
  std::vector<TrajectoryPath> none;
  auto g = std::make_shared<PathletGraph>(PathletGraph::build(net, none));
  MergeEnvironment env(toy_config(), g);
  EXPECT_THROW(env.reset(), Error);
}

TEST(MergeEnvironment, SeededResetsAreReproducible) {
  SyntheticWorldSpec spec;
  spec.grid_width = 4;
  spec.grid_height = 4;
  spec.n_trajectories = 40;
  auto w = generate_world(spec);
  auto net = std::make_shared<RoadNetwork>(w.network);
  auto g = std::make_shared<PathletGraph>(PathletGraph::build(net, w.trajectories));
  auto play = [&](std::uint64_t seed) {
    MergeEnvironment env(toy_config(), g);
    env.reset(seed);
    env.set_trace_enabled(true);
    std::mt19937_64 rng(seed);
    while (!env.done()) env.step(rng() % env.action_count());
    std::vector<double> out;
    for (const auto& row : env.trace()) out.push_back(row.reward);
    out.push_back(env.graph().live_count());
    return out;
  };
  EXPECT_EQ(play(5), play(5));
  EXPECT_NE(play(5), play(6));
}

TEST(MergeEnvironment, ConfigValidation) {
  EnvConfig c = toy_config();
  c.k = 0;
  EXPECT_THROW(validate(c), Error);
  c = toy_config();
  c.max_loss = 1.5;
  EXPECT_THROW(validate(c), Error);
  c = toy_config();
  c.reward.alphas = {0.5, 0.5, 0.5, 0.5};
  EXPECT_THROW(validate(c), Error);
  EXPECT_EQ(parse_variant("NR"), Variant::kNoRepresentability);
  EXPECT_EQ(parse_variant("UNW"), Variant::kUnweighted);
  EXPECT_THROW(parse_state_mode("rich"), Error);
}

// Property: with random actions on random grid worlds, tracked per-trajectory
// representability always equals the from-scratch quotient and never rises.
TEST(MergeEnvironment, RepresentabilityTrackingMatchesScratchAndIsMonotone) {
  for (int world = 0; world < 10; ++world) {
    SyntheticWorldSpec spec;
    spec.grid_width = 4;
    spec.grid_height = 3;
    spec.n_trajectories = 25;
    spec.seed = 100 + world;
    auto w = generate_world(spec);
    auto net = std::make_shared<RoadNetwork>(w.network);
    auto g = std::make_shared<PathletGraph>(PathletGraph::build(net, w.trajectories));
    EnvConfig c = toy_config();
    c.max_loss = 1.0;
    c.mu_threshold = 0.0;
    MergeEnvironment env(c, g);
    env.reset(world);
    std::mt19937_64 rng(world);
    std::vector<int> last(w.trajectories.size(), 1 << 30);
    while (!env.done()) {
      env.step(rng() % env.action_count());
      const auto scratch = testing::scratch_representability(env.graph());
      const auto& recs = env.graph().trajectories();
      for (std::size_t t = 0; t < recs.size(); ++t) {
        if (!recs[t].alive) continue;
        ASSERT_EQ(recs[t].covered_length, scratch[t].first);
        ASSERT_LE(recs[t].covered_length, last[t]);
        last[t] = recs[t].covered_length;
      }
    }
  }
}

}  // namespace
}  // namespace pathlet
