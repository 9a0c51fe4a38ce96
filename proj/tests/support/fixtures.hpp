#pragma once

#include <array>
#include <filesystem>
#include <memory>
#include <string>
#include <vector>

#include "pathlet/pathlet_graph.hpp"
#include "pathlet/road_network.hpp"

namespace pathlet::testing {

inline std::filesystem::path fixture(const std::string& name) {
  return std::filesystem::path(PATHLET_FIXTURE_DIR) / name;
}

struct Example1 {
  std::shared_ptr<RoadNetwork> net;
  std::vector<TrajectoryPath> trajs;
  std::shared_ptr<PathletGraph> graph;

  // Pathlet id of the unit pathlet holding segment `name` ("1".."9").
  PathletId rho(const std::string& name) const {
    return *net->find_segment(name);
  }
};

inline Example1 load_example1() {
  Example1 ex;
  ex.net = std::make_shared<RoadNetwork>(
      load_road_network(fixture("example1_network.csv")));
  ex.trajs = load_trajectories(fixture("example1_trajectories.txt"), *ex.net);
  ex.graph = std::make_shared<PathletGraph>(PathletGraph::build(ex.net, ex.trajs));
  return ex;
}

// Road network from `{name, u, v}` triples.
inline std::shared_ptr<RoadNetwork> make_network(
    const std::vector<std::array<std::string, 3>>& rows) {
  auto net = std::make_shared<RoadNetwork>();
  for (const auto& r : rows) net->add_segment(r[0], r[1], r[2]);
  return net;
}

// Path graph with `n` segments e0..e{n-1} over nodes p0..pn.
inline RoadNetwork path_graph(int n) {
  RoadNetwork net;
  for (int i = 0; i < n; ++i) {
    net.add_segment("e" + std::to_string(i), "p" + std::to_string(i),
                    "p" + std::to_string(i + 1));
  }
  return net;
}

}  // namespace pathlet::testing
