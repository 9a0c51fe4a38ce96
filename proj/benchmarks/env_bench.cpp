#include <memory>
#include <random>

#include <benchmark/benchmark.h>

#include "pathlet/merge_env.hpp"
#include "pathlet/synthetic.hpp"

namespace {

std::shared_ptr<const pathlet::PathletGraph> grid_graph(int side, int trajectories) {
  pathlet::SyntheticWorldSpec spec;
  spec.grid_width = side;
  spec.grid_height = side;
  spec.n_trajectories = trajectories;
  spec.straight_bias = 0.9;
  auto world = pathlet::generate_world(spec);
  auto net = std::make_shared<pathlet::RoadNetwork>(world.network);
  return std::make_shared<pathlet::PathletGraph>(
      pathlet::PathletGraph::build(net, world.trajectories));
}

// One full random-action episode, reset included.
void BM_RandomEpisode(benchmark::State& state) {
  const auto graph = grid_graph(int(state.range(0)), int(state.range(1)));
  pathlet::EnvConfig config;
  config.k = 5;
  config.max_loss = 1.0;
  config.mu_threshold = 0.0;
  pathlet::MergeEnvironment env(config, graph);
  std::mt19937_64 rng(1);
  std::int64_t steps = 0;
  for (auto _ : state) {
    env.reset(rng());
    while (!env.done()) env.step(int(rng() % env.action_count()));
    steps += env.steps_taken();
  }
  state.counters["steps/s"] =
      benchmark::Counter(double(steps), benchmark::Counter::kIsRate);
}
BENCHMARK(BM_RandomEpisode)->Args({6, 200})->Args({12, 800})->Unit(benchmark::kMillisecond);

void BM_GraphBuild(benchmark::State& state) {
  pathlet::SyntheticWorldSpec spec;
  spec.grid_width = int(state.range(0));
  spec.grid_height = int(state.range(0));
  spec.n_trajectories = int(state.range(1));
  auto world = pathlet::generate_world(spec);
  auto net = std::make_shared<pathlet::RoadNetwork>(world.network);
  for (auto _ : state) {
    benchmark::DoNotOptimize(pathlet::PathletGraph::build(net, world.trajectories));
  }
}
BENCHMARK(BM_GraphBuild)->Args({6, 200})->Args({20, 5000})->Unit(benchmark::kMicrosecond);

}  // namespace
