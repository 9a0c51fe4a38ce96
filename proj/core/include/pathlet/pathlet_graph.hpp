#pragma once

#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "pathlet/road_network.hpp"

namespace pathlet {

using PathletId = std::int32_t;
using TrajIndex = std::int32_t;

// An edge-disjoint sub-path of the road network. `edges` and `nodes` are
// oriented from start() to end(); `traversal` holds the sorted indices of the
// trajectories whose representation still contains this pathlet.
struct Pathlet {
  PathletId id = -1;
  std::vector<EdgeId> edges;
  std::vector<NodeId> nodes;
  std::vector<TrajIndex> traversal;
  bool live = true;

  NodeId start() const { return nodes.front(); }
  NodeId end() const { return nodes.back(); }
  int length() const { return static_cast<int>(edges.size()); }
};

// One run of a trajectory's walk that is represented by a single pathlet.
// `offset` indexes into the trajectory's original segment sequence.
struct RepresentationEntry {
  PathletId pathlet = -1;
  int offset = 0;
  int length = 0;

  friend bool operator==(const RepresentationEntry&,
                         const RepresentationEntry&) = default;
};

struct TrajectoryRecord {
  std::string id;
  std::vector<EdgeId> edges;
  // Sum of initial pathlet lengths; fixed once the graph is built.
  int initial_length = 0;
  // Sum of lengths of the pathlets currently in `representation`.
  int covered_length = 0;
  std::vector<RepresentationEntry> representation;
  bool alive = true;

  double representability() const {
    return initial_length == 0
               ? 0.0
               : static_cast<double>(covered_length) / initial_length;
  }
};

// What happens to a trajectory that traverses only one side of a merge.
enum class PartialLoss {
  kDropPathlet,     // the unmatched pathlet leaves its representation
  kDropTrajectory,  // the whole trajectory is discarded
};

struct MergeOutcome {
  PathletId merged = -1;
  int trajectories_touched = 0;
  int trajectories_killed = 0;
};

// Mutable pathlet graph over an immutable road network, together with the
// pathlet-based representation of every trajectory.
class PathletGraph {
 public:
  // One length-1 pathlet per segment, ids equal to segment ids. Throws
  // Error(kIngestion) naming the trajectory on unknown or non-contiguous input.
  static PathletGraph build(std::shared_ptr<const RoadNetwork> net,
                            std::span<const TrajectoryPath> trajs);

  const RoadNetwork& network() const { return *net_; }

  // Throws Error(kLookup) for ids that were never created.
  const Pathlet& pathlet(PathletId id) const;
  bool is_live(PathletId id) const;
  std::size_t live_count() const { return live_count_; }
  std::size_t initial_count() const { return initial_count_; }
  std::vector<PathletId> live_pathlets() const;
  const std::vector<Pathlet>& all_pathlets() const { return pathlets_; }

  // Live pathlets whose start or end node is `n`.
  const std::vector<PathletId>& incident(NodeId n) const;

  // Live pathlets other than `id` sharing an endpoint with it, ascending ids.
  // Throws Error(kLookup) if `id` is not live.
  std::vector<PathletId> neighbors(PathletId id) const;

  // |traversal| / |trajectories|, or 0 with no trajectories.
  double weight(PathletId id) const;

  std::size_t trajectory_count() const { return trajectories_.size(); }
  const std::vector<TrajectoryRecord>& trajectories() const {
    return trajectories_;
  }

  bool processed(PathletId id) const;
  void mark_processed(PathletId id);

  // True if both are live, distinct, and joining them at their single shared
  // endpoint yields a simple path.
  bool mergeable(PathletId a, PathletId b) const;

  // Joins `a` and `b` into a new pathlet whose edges run through `a` first.
  // Trajectories traversing both consecutively keep the merged pathlet;
  // others lose their unmatched run according to `policy`. Trajectories left
  // with nothing are marked dead. Throws Error(kUsage) if not mergeable.
  MergeOutcome merge(PathletId a, PathletId b,
                     PartialLoss policy = PartialLoss::kDropPathlet);

 private:
  void attach(PathletId id);
  void detach(PathletId id);
  void kill_trajectory(TrajIndex t);

  std::shared_ptr<const RoadNetwork> net_;
  std::vector<Pathlet> pathlets_;
  std::vector<std::vector<PathletId>> node_index_;
  std::vector<bool> processed_;
  std::vector<TrajectoryRecord> trajectories_;
  std::size_t live_count_ = 0;
  std::size_t initial_count_ = 0;
};

}  // namespace pathlet
