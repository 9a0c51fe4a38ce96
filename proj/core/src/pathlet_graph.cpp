#include "pathlet/pathlet_graph.hpp"

#include <algorithm>
#include <iterator>

#include "pathlet/error.hpp"

namespace pathlet {
namespace {

void erase_sorted(std::vector<TrajIndex>& v, TrajIndex t) {
  auto it = std::lower_bound(v.begin(), v.end(), t);
  if (it != v.end() && *it == t) v.erase(it);
}

}  // namespace

PathletGraph PathletGraph::build(std::shared_ptr<const RoadNetwork> net,
                                 std::span<const TrajectoryPath> trajs) {
  PathletGraph g;
  g.net_ = std::move(net);
  const RoadNetwork& road = *g.net_;

  g.pathlets_.reserve(road.edge_count());
  for (EdgeId e = 0; e < EdgeId(road.edge_count()); ++e) {
    const Segment& s = road.segment(e);
    Pathlet p;
    p.id = e;
    p.edges = {e};
    p.nodes = {s.u, s.v};
    g.pathlets_.push_back(std::move(p));
  }
  g.node_index_.assign(road.node_count(), {});
  for (const auto& p : g.pathlets_) g.attach(p.id);
  g.processed_.assign(g.pathlets_.size(), false);
  g.live_count_ = g.initial_count_ = g.pathlets_.size();

  g.trajectories_.reserve(trajs.size());
  for (std::size_t t = 0; t < trajs.size(); ++t) {
    const TrajectoryPath& path = trajs[t];
    for (EdgeId e : path.edges) {
      if (e < 0 || e >= EdgeId(road.edge_count())) {
        throw Error(ErrorCode::kIngestion,
                    "trajectory " + path.id + " references unknown segment");
      }
    }
    if (path.edges.empty() || !road.walk_nodes(path.edges)) {
      throw Error(ErrorCode::kIngestion,
                  "trajectory " + path.id + " is not a contiguous walk");
    }
    TrajectoryRecord rec;
    rec.id = path.id;
    rec.edges = path.edges;
    rec.initial_length = rec.covered_length = int(path.edges.size());
    rec.representation.reserve(path.edges.size());
    for (int i = 0; i < int(path.edges.size()); ++i) {
      rec.representation.push_back({path.edges[i], i, 1});
      auto& lambda = g.pathlets_[path.edges[i]].traversal;
      // Trajectories are appended in index order, so a repeat traversal can
      // only ever match the last element.
      if (lambda.empty() || lambda.back() != TrajIndex(t)) {
        lambda.push_back(TrajIndex(t));
      }
    }
    g.trajectories_.push_back(std::move(rec));
  }
  return g;
}

const Pathlet& PathletGraph::pathlet(PathletId id) const {
  if (id < 0 || id >= PathletId(pathlets_.size())) {
    throw Error(ErrorCode::kLookup, "unknown pathlet " + std::to_string(id));
  }
  return pathlets_[id];
}

bool PathletGraph::is_live(PathletId id) const {
  return id >= 0 && id < PathletId(pathlets_.size()) && pathlets_[id].live;
}

std::vector<PathletId> PathletGraph::live_pathlets() const {
  std::vector<PathletId> out;
  out.reserve(live_count_);
  for (const auto& p : pathlets_) {
    if (p.live) out.push_back(p.id);
  }
  return out;
}

const std::vector<PathletId>& PathletGraph::incident(NodeId n) const {
  return node_index_.at(n);
}

std::vector<PathletId> PathletGraph::neighbors(PathletId id) const {
  if (!is_live(id)) {
    throw Error(ErrorCode::kLookup,
                "pathlet " + std::to_string(id) + " is not live");
  }
  const Pathlet& p = pathlets_[id];
  std::vector<PathletId> out;
  for (NodeId n : {p.start(), p.end()}) {
    for (PathletId q : node_index_[n]) {
      if (q != id) out.push_back(q);
    }
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

double PathletGraph::weight(PathletId id) const {
  if (trajectories_.empty()) return 0.0;
  return static_cast<double>(pathlet(id).traversal.size()) /
         static_cast<double>(trajectories_.size());
}

bool PathletGraph::processed(PathletId id) const {
  return id >= 0 && id < PathletId(processed_.size()) && processed_[id];
}

void PathletGraph::mark_processed(PathletId id) {
  if (!is_live(id)) {
    throw Error(ErrorCode::kLookup,
                "pathlet " + std::to_string(id) + " is not live");
  }
  processed_[id] = true;
}

bool PathletGraph::mergeable(PathletId a, PathletId b) const {
  if (a == b || !is_live(a) || !is_live(b)) return false;
  const Pathlet& pa = pathlets_[a];
  const Pathlet& pb = pathlets_[b];
  int shared = 0;
  for (NodeId n : pa.nodes) {
    if (std::find(pb.nodes.begin(), pb.nodes.end(), n) != pb.nodes.end()) {
      ++shared;
    }
  }
  if (shared != 1) return false;
  const bool a_end = pa.start() == pb.start() || pa.start() == pb.end() ||
                     pa.end() == pb.start() || pa.end() == pb.end();
  return a_end;
}

void PathletGraph::attach(PathletId id) {
  const Pathlet& p = pathlets_[id];
  node_index_[p.start()].push_back(id);
  node_index_[p.end()].push_back(id);
}

void PathletGraph::detach(PathletId id) {
  const Pathlet& p = pathlets_[id];
  for (NodeId n : {p.start(), p.end()}) {
    auto& v = node_index_[n];
    v.erase(std::remove(v.begin(), v.end(), id), v.end());
  }
}

void PathletGraph::kill_trajectory(TrajIndex t) {
  TrajectoryRecord& rec = trajectories_[t];
  for (const auto& entry : rec.representation) {
    erase_sorted(pathlets_[entry.pathlet].traversal, t);
  }
  rec.representation.clear();
  rec.covered_length = 0;
  rec.alive = false;
}

MergeOutcome PathletGraph::merge(PathletId a, PathletId b, PartialLoss policy) {
  if (!mergeable(a, b)) {
    throw Error(ErrorCode::kUsage, "pathlets " + std::to_string(a) + " and " +
                                       std::to_string(b) +
                                       " cannot be merged");
  }
  const PathletId merged_id = PathletId(pathlets_.size());
  Pathlet merged;
  merged.id = merged_id;
  {
    const Pathlet& pa = pathlets_[a];
    const Pathlet& pb = pathlets_[b];
    const NodeId join =
        (pa.end() == pb.start() || pa.end() == pb.end()) ? pa.end() : pa.start();
    merged.edges = pa.edges;
    merged.nodes = pa.nodes;
    if (pa.end() != join) {
      std::reverse(merged.edges.begin(), merged.edges.end());
      std::reverse(merged.nodes.begin(), merged.nodes.end());
    }
    if (pb.start() == join) {
      merged.edges.insert(merged.edges.end(), pb.edges.begin(), pb.edges.end());
      merged.nodes.insert(merged.nodes.end(), pb.nodes.begin() + 1,
                          pb.nodes.end());
    } else {
      merged.edges.insert(merged.edges.end(), pb.edges.rbegin(),
                          pb.edges.rend());
      merged.nodes.insert(merged.nodes.end(), pb.nodes.rbegin() + 1,
                          pb.nodes.rend());
    }
  }

  std::vector<TrajIndex> touched;
  std::set_union(pathlets_[a].traversal.begin(), pathlets_[a].traversal.end(),
                 pathlets_[b].traversal.begin(), pathlets_[b].traversal.end(),
                 std::back_inserter(touched));

  MergeOutcome outcome;
  outcome.merged = merged_id;
  outcome.trajectories_touched = int(touched.size());

  std::vector<TrajIndex> partial;
  for (TrajIndex t : touched) {
    TrajectoryRecord& rec = trajectories_[t];
    std::vector<RepresentationEntry> next;
    next.reserve(rec.representation.size());
    bool kept = false;
    bool lost = false;
    const auto& rep = rec.representation;
    for (std::size_t i = 0; i < rep.size(); ++i) {
      const auto& e = rep[i];
      const bool is_a = e.pathlet == a;
      const bool is_b = e.pathlet == b;
      if (!is_a && !is_b) {
        next.push_back(e);
        continue;
      }
      if (i + 1 < rep.size()) {
        const auto& f = rep[i + 1];
        const bool pairs = (is_a && f.pathlet == b) || (is_b && f.pathlet == a);
        if (pairs && e.offset + e.length == f.offset) {
          next.push_back({merged_id, e.offset, e.length + f.length});
          kept = true;
          ++i;
          continue;
        }
      }
      rec.covered_length -= e.length;
      lost = true;
    }
    rec.representation = std::move(next);
    if (kept) merged.traversal.push_back(t);
    if (lost) partial.push_back(t);
  }

  pathlets_[a].live = false;
  pathlets_[b].live = false;
  detach(a);
  detach(b);
  pathlets_[a].traversal.clear();
  pathlets_[b].traversal.clear();
  pathlets_.push_back(std::move(merged));
  processed_.push_back(false);
  attach(merged_id);
  --live_count_;

  for (TrajIndex t : partial) {
    TrajectoryRecord& rec = trajectories_[t];
    if (policy == PartialLoss::kDropTrajectory || rec.covered_length == 0) {
      kill_trajectory(t);
      ++outcome.trajectories_killed;
    }
  }
  return outcome;
}

}  // namespace pathlet
