#include "pathlet/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <random>
#include <string>

#include "pathlet/error.hpp"

namespace pathlet {
namespace {

std::string node_name(int x, int y) {
  return "n" + std::to_string(x) + "_" + std::to_string(y);
}

std::ofstream open_output(const std::filesystem::path& path) {
  if (path.has_parent_path()) {
    std::error_code ec;
    std::filesystem::create_directories(path.parent_path(), ec);
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::kIo, "cannot write " + path.string());
  return out;
}

}  // namespace

void validate(const SyntheticWorldSpec& spec) {
  if (spec.grid_width <= 0 || spec.grid_height <= 0) {
    throw Error(ErrorCode::kConfig, "grid dimensions must be positive");
  }
  if (spec.n_trajectories <= 0) {
    throw Error(ErrorCode::kConfig, "n_trajectories must be positive");
  }
  const auto [lo, hi] = spec.walk_length_range;
  if (lo < 1 || hi < lo) {
    throw Error(ErrorCode::kConfig, "walk length range must satisfy 1 <= min <= max");
  }
  if (!(spec.straight_bias >= 0.0 && spec.straight_bias <= 1.0)) {
    throw Error(ErrorCode::kConfig, "straight_bias must lie in [0,1]");
  }
}

SyntheticWorld generate_world(const SyntheticWorldSpec& spec) {
  validate(spec);
  SyntheticWorld world;
  const int w = spec.grid_width;
  const int h = spec.grid_height;
  for (int y = 0; y <= h; ++y) {
    for (int x = 0; x < w; ++x) {
      world.network.add_segment(
          "h" + std::to_string(x) + "_" + std::to_string(y), node_name(x, y),
          node_name(x + 1, y));
    }
  }
  for (int x = 0; x <= w; ++x) {
    for (int y = 0; y < h; ++y) {
      world.network.add_segment(
          "v" + std::to_string(x) + "_" + std::to_string(y), node_name(x, y),
          node_name(x, y + 1));
    }
  }
  const RoadNetwork& net = world.network;
  const auto node_count = net.node_count();

  std::mt19937_64 rng(spec.seed);
  std::uniform_int_distribution<int> length_dist(spec.walk_length_range.first,
                                                 spec.walk_length_range.second);
  std::uniform_int_distribution<std::size_t> start_dist(0, node_count - 1);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  constexpr int kMaxAttempts = 1000;

  for (int t = 0; t < spec.n_trajectories; ++t) {
    const int target = length_dist(rng);
    std::vector<EdgeId> edges;
    for (int attempt = 0;; ++attempt) {
      if (attempt == kMaxAttempts) {
        throw Error(ErrorCode::kConfig,
                    "cannot place a self-avoiding walk of length " +
                        std::to_string(target));
      }
      edges.clear();
      std::vector<bool> visited(node_count, false);
      NodeId at = NodeId(start_dist(rng));
      visited[at] = true;
      EdgeId last = -1;
      while (int(edges.size()) < target) {
        std::vector<EdgeId> options;
        for (EdgeId e : net.incident(at)) {
          if (!visited[net.segment(e).other(at)]) options.push_back(e);
        }
        if (options.empty()) break;
        EdgeId chosen = -1;
        if (last >= 0 && spec.straight_bias > 0.0) {
          // Straight on keeps the segment's orientation letter.
          const char dir = net.segment(last).name.front();
          auto straight = std::find_if(options.begin(), options.end(),
                                       [&](EdgeId e) {
                                         return net.segment(e).name.front() == dir;
                                       });
          if (straight != options.end() && unit(rng) < spec.straight_bias) {
            chosen = *straight;
          }
        }
        if (chosen < 0) {
          std::uniform_int_distribution<std::size_t> pick(0, options.size() - 1);
          chosen = options[pick(rng)];
        }
        edges.push_back(chosen);
        at = net.segment(chosen).other(at);
        visited[at] = true;
        last = chosen;
      }
      if (int(edges.size()) == target) break;
    }
    world.trajectories.push_back(
        TrajectoryPath{"t" + std::to_string(t + 1), std::move(edges)});
  }
  return world;
}

void write_world(const SyntheticWorld& world,
                 const std::filesystem::path& network_file,
                 const std::filesystem::path& trajectory_file) {
  {
    auto out = open_output(network_file);
    write_road_network(out, world.network);
    if (!out) throw Error(ErrorCode::kIo, "write failed: " + network_file.string());
  }
  auto out = open_output(trajectory_file);
  write_trajectories(out, world.network, world.trajectories);
  if (!out) throw Error(ErrorCode::kIo, "write failed: " + trajectory_file.string());
}

std::uint64_t stable_hash(std::string_view text, std::uint64_t seed) {
  // FNV-1a, seeded by folding the seed bytes in first.
  std::uint64_t h = 0xcbf29ce484222325ULL;
  auto mix = [&h](unsigned char byte) {
    h ^= byte;
    h *= 0x100000001b3ULL;
  };
  for (int i = 0; i < 8; ++i) mix(static_cast<unsigned char>(seed >> (8 * i)));
  for (char c : text) mix(static_cast<unsigned char>(c));
  return h;
}

TrajectorySplit split_trajectories(const std::vector<TrajectoryPath>& trajs,
                                   double fraction, std::uint64_t seed) {
  if (!(fraction > 0.0 && fraction < 1.0)) {
    throw Error(ErrorCode::kConfig, "split fraction must lie in (0,1)");
  }
  const std::size_t n = trajs.size();
  const auto n_train = std::size_t(std::llround(fraction * double(n)));
  if (n < 2 || n_train == 0 || n_train == n) {
    throw Error(ErrorCode::kValidation,
                "split of " + std::to_string(n) +
                    " trajectories leaves one side empty");
  }
  std::vector<std::pair<std::uint64_t, std::size_t>> keyed;
  for (std::size_t i = 0; i < n; ++i) {
    keyed.emplace_back(stable_hash(trajs[i].id, seed), i);
  }
  std::sort(keyed.begin(), keyed.end());
  std::vector<bool> in_train(n, false);
  for (std::size_t i = 0; i < n_train; ++i) in_train[keyed[i].second] = true;
  TrajectorySplit split;
  for (std::size_t i = 0; i < n; ++i) {
    (in_train[i] ? split.train : split.test).push_back(trajs[i]);
  }
  return split;
}

}  // namespace pathlet
