#include "pathlet/road_network.hpp"

#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <unordered_set>

#include "pathlet/error.hpp"

namespace pathlet {
namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::vector<std::string_view> split_fields(std::string_view line, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = line.find(sep, start);
    out.push_back(trim(line.substr(start, pos - start)));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

bool skippable(std::string_view line) {
  line = trim(line);
  return line.empty() || line.front() == '#';
}

std::ifstream open_input(const std::filesystem::path& path) {
  if (!std::filesystem::exists(path)) {
    throw Error(ErrorCode::kMissingInput,
                "input file not found: " + path.string());
  }
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIo, "cannot open " + path.string());
  return in;
}

}  // namespace

NodeId RoadNetwork::intern_node(std::string_view name) {
  auto [it, inserted] =
      node_index_.try_emplace(std::string(name), NodeId(node_names_.size()));
  if (inserted) {
    node_names_.emplace_back(name);
    incident_.emplace_back();
  }
  return it->second;
}

EdgeId RoadNetwork::add_segment(std::string_view name, std::string_view node_u,
                                std::string_view node_v) {
  if (name.empty() || node_u.empty() || node_v.empty()) {
    throw Error(ErrorCode::kValidation, "segment fields must be non-empty");
  }
  if (node_u == node_v) {
    throw Error(ErrorCode::kValidation,
                "self-loop on segment " + std::string(name));
  }
  if (segment_index_.count(std::string(name)) != 0) {
    throw Error(ErrorCode::kValidation,
                "duplicate segment id " + std::string(name));
  }
  const NodeId u = intern_node(node_u);
  const NodeId v = intern_node(node_v);
  const auto id = EdgeId(segments_.size());
  segments_.push_back(Segment{std::string(name), u, v});
  segment_index_.emplace(std::string(name), id);
  incident_[u].push_back(id);
  incident_[v].push_back(id);
  return id;
}

std::optional<EdgeId> RoadNetwork::find_segment(std::string_view name) const {
  auto it = segment_index_.find(std::string(name));
  if (it == segment_index_.end()) return std::nullopt;
  return it->second;
}

std::optional<NodeId> RoadNetwork::find_node(std::string_view name) const {
  auto it = node_index_.find(std::string(name));
  if (it == node_index_.end()) return std::nullopt;
  return it->second;
}

std::optional<std::vector<NodeId>> RoadNetwork::walk_nodes(
    const std::vector<EdgeId>& edges) const {
  if (edges.empty()) return std::vector<NodeId>{};
  const Segment& first = segments_.at(edges.front());
  // Try both orientations of the first segment; only one can continue the
  // walk unless the trajectory is a single segment.
  for (NodeId start : {first.u, first.v}) {
    std::vector<NodeId> nodes{start};
    NodeId at = start;
    bool ok = true;
    for (EdgeId e : edges) {
      const Segment& s = segments_.at(e);
      if (!s.touches(at)) {
        ok = false;
        break;
      }
      at = s.other(at);
      nodes.push_back(at);
    }
    if (ok) return nodes;
  }
  return std::nullopt;
}

RoadNetwork parse_road_network(std::istream& in) {
  RoadNetwork net;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (skippable(line)) continue;
    const auto fields = split_fields(line, ',');
    if (fields.size() != 3 || fields[0].empty() || fields[1].empty() ||
        fields[2].empty()) {
      throw Error(ErrorCode::kParse,
                  "line " + std::to_string(line_no) +
                      ": expected edge_id,node_u,node_v");
    }
    try {
      net.add_segment(fields[0], fields[1], fields[2]);
    } catch (const Error& e) {
      throw Error(e.code(), "line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  return net;
}

RoadNetwork load_road_network(const std::filesystem::path& path) {
  auto in = open_input(path);
  return parse_road_network(in);
}

std::vector<TrajectoryPath> parse_trajectories(std::istream& in,
                                               const RoadNetwork& net) {
  std::vector<TrajectoryPath> out;
  std::unordered_set<std::string> seen;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (skippable(line)) continue;
    const auto colon = line.find(':');
    if (colon == std::string::npos) {
      throw Error(ErrorCode::kParse, "line " + std::to_string(line_no) +
                                         ": expected traj_id:edge,edge,...");
    }
    TrajectoryPath traj;
    traj.id = std::string(trim(std::string_view(line).substr(0, colon)));
    if (traj.id.empty()) {
      throw Error(ErrorCode::kParse,
                  "line " + std::to_string(line_no) + ": empty trajectory id");
    }
    if (!seen.insert(traj.id).second) {
      throw Error(ErrorCode::kValidation,
                  "duplicate trajectory id " + traj.id);
    }
    const auto body = trim(std::string_view(line).substr(colon + 1));
    if (body.empty()) {
      throw Error(ErrorCode::kIngestion,
                  "trajectory " + traj.id + " has no segments");
    }
    for (auto token : split_fields(body, ',')) {
      auto e = net.find_segment(token);
      if (!e) {
        throw Error(ErrorCode::kIngestion,
                    "trajectory " + traj.id + " references unknown segment " +
                        std::string(token));
      }
      traj.edges.push_back(*e);
    }
    if (!net.walk_nodes(traj.edges)) {
      throw Error(ErrorCode::kIngestion,
                  "trajectory " + traj.id + " is not a contiguous walk");
    }
    out.push_back(std::move(traj));
  }
  return out;
}

std::vector<TrajectoryPath> load_trajectories(const std::filesystem::path& path,
                                              const RoadNetwork& net) {
  auto in = open_input(path);
  return parse_trajectories(in, net);
}

void write_road_network(std::ostream& out, const RoadNetwork& net) {
  for (const auto& s : net.segments()) {
    out << s.name << ',' << net.node_name(s.u) << ',' << net.node_name(s.v)
        << '\n';
  }
}

void write_trajectories(std::ostream& out, const RoadNetwork& net,
                        const std::vector<TrajectoryPath>& trajs) {
  for (const auto& t : trajs) {
    out << t.id << ':';
    for (std::size_t i = 0; i < t.edges.size(); ++i) {
      if (i) out << ',';
      out << net.segment(t.edges[i]).name;
    }
    out << '\n';
  }
}

}  // namespace pathlet
