#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace pathlet {

using NodeId = std::int32_t;
using EdgeId = std::int32_t;

struct Segment {
  std::string name;
  NodeId u = 0;
  NodeId v = 0;

  bool touches(NodeId n) const { return u == n || v == n; }
  NodeId other(NodeId n) const { return n == u ? v : u; }
};

// Undirected road network. Intersections and segments keep their external
// names; internally both are addressed by dense indices in insertion order.
class RoadNetwork {
 public:
  RoadNetwork() = default;

  // Throws Error(kValidation) on a duplicate segment name or a self-loop.
  EdgeId add_segment(std::string_view name, std::string_view node_u,
                     std::string_view node_v);

  std::size_t node_count() const { return node_names_.size(); }
  std::size_t edge_count() const { return segments_.size(); }

  const Segment& segment(EdgeId e) const { return segments_.at(e); }
  const std::vector<Segment>& segments() const { return segments_; }
  const std::string& node_name(NodeId n) const { return node_names_.at(n); }
  const std::vector<EdgeId>& incident(NodeId n) const { return incident_.at(n); }

  std::optional<EdgeId> find_segment(std::string_view name) const;
  std::optional<NodeId> find_node(std::string_view name) const;

  // Node sequence visited by walking `edges` in order, or nullopt when two
  // consecutive segments do not share an intersection.
  std::optional<std::vector<NodeId>> walk_nodes(
      const std::vector<EdgeId>& edges) const;

 private:
  NodeId intern_node(std::string_view name);

  std::vector<std::string> node_names_;
  std::unordered_map<std::string, NodeId> node_index_;
  std::vector<Segment> segments_;
  std::unordered_map<std::string, EdgeId> segment_index_;
  std::vector<std::vector<EdgeId>> incident_;
};

// A map-matched trajectory: an ordered walk over segment ids.
struct TrajectoryPath {
  std::string id;
  std::vector<EdgeId> edges;
};

// Edge-list format: one `edge_id,node_u,node_v` row per line, `#` comments.
RoadNetwork parse_road_network(std::istream& in);
RoadNetwork load_road_network(const std::filesystem::path& path);

// Trajectory format: `traj_id:edge_1,edge_2,...` per line, `#` comments.
// Unknown segments and non-contiguous walks are rejected naming the trajectory.
std::vector<TrajectoryPath> parse_trajectories(std::istream& in,
                                               const RoadNetwork& net);
std::vector<TrajectoryPath> load_trajectories(const std::filesystem::path& path,
                                              const RoadNetwork& net);

void write_road_network(std::ostream& out, const RoadNetwork& net);
void write_trajectories(std::ostream& out, const RoadNetwork& net,
                        const std::vector<TrajectoryPath>& trajs);

}  // namespace pathlet
