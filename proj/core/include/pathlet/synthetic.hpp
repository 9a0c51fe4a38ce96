#pragma once

#include <cstdint>
#include <filesystem>
#include <utility>
#include <vector>

#include "pathlet/road_network.hpp"

namespace pathlet {

// Grid road network with seeded random-walk trajectories, standing in for
// simulator-generated vehicular data.
struct SyntheticWorldSpec {
  int grid_width = 6;   // cells
  int grid_height = 6;  // cells
  int n_trajectories = 200;
  std::pair<int, int> walk_length_range{3, 8};
  // Probability of continuing straight through an interior intersection when
  // that move is available; otherwise moves are uniform.
  double straight_bias = 0.0;
  std::uint64_t seed = 0;
};

void validate(const SyntheticWorldSpec& spec);

struct SyntheticWorld {
  RoadNetwork network;
  std::vector<TrajectoryPath> trajectories;
};

// Nodes are `n<x>_<y>`; horizontal segments `h<x>_<y>`, vertical `v<x>_<y>`.
// Walks never revisit an intersection; a walk that gets stuck short of its
// drawn length is restarted.
SyntheticWorld generate_world(const SyntheticWorldSpec& spec);

void write_world(const SyntheticWorld& world,
                 const std::filesystem::path& network_file,
                 const std::filesystem::path& trajectory_file);

struct TrajectorySplit {
  std::vector<TrajectoryPath> train;
  std::vector<TrajectoryPath> test;
};

// Orders trajectories by a seeded hash of their id and puts the first
// round(fraction * n) in the training set. Throws Error(kValidation) when
// either side would be empty.
TrajectorySplit split_trajectories(const std::vector<TrajectoryPath>& trajs,
                                   double fraction, std::uint64_t seed);

std::uint64_t stable_hash(std::string_view text, std::uint64_t seed);

}  // namespace pathlet
