#include <Eigen/Dense>

#include "pathlet/error.hpp"
#include "pathlet/metrics.hpp"

namespace pathlet {
namespace {

class SimplePathCounter {
 public:
  SimplePathCounter(const RoadNetwork& net, int max_length,
                    std::uint64_t budget)
      : net_(net), max_length_(max_length), budget_(budget),
        on_path_(net.node_count(), false) {}

  // Ordered count: every undirected path is reached once from each end.
  std::uint64_t run() {
    for (NodeId s = 0; s < NodeId(net_.node_count()); ++s) {
      on_path_[s] = true;
      extend(s, 0);
      on_path_[s] = false;
    }
    return ordered_ / 2;
  }

 private:
  void extend(NodeId at, int depth) {
    if (depth == max_length_) return;
    for (EdgeId e : net_.incident(at)) {
      const NodeId next = net_.segment(e).other(at);
      if (on_path_[next]) continue;
      if (++ordered_ / 2 > budget_) {
        throw Error(ErrorCode::kBudgetExceeded,
                    "top-down enumeration exceeded the path budget of " +
                        std::to_string(budget_));
      }
      on_path_[next] = true;
      extend(next, depth + 1);
      on_path_[next] = false;
    }
  }

  const RoadNetwork& net_;
  int max_length_;
  std::uint64_t budget_;
  std::vector<bool> on_path_;
  std::uint64_t ordered_ = 0;
};

}  // namespace

std::uint64_t memory_estimate_topdown(const RoadNetwork& net,
                                      std::optional<int> max_length,
                                      std::uint64_t budget) {
  const int bound = max_length.value_or(int(net.edge_count()));
  if (bound < 1) throw Error(ErrorCode::kConfig, "length bound must be >= 1");
  return SimplePathCounter(net, bound, budget).run();
}

std::uint64_t memory_estimate_bottomup(const RoadNetwork& net) {
  return net.edge_count();
}

std::uint64_t count_walks_by_powers(const RoadNetwork& net,
                                    std::optional<int> max_length) {
  using Matrix =
      Eigen::Matrix<std::uint64_t, Eigen::Dynamic, Eigen::Dynamic>;
  const auto n = Eigen::Index(net.node_count());
  const int bound = max_length.value_or(int(net.edge_count()));
  Matrix adjacency = Matrix::Zero(n, n);
  for (const auto& s : net.segments()) {
    adjacency(s.u, s.v) += 1;
    adjacency(s.v, s.u) += 1;
  }
  Matrix power = adjacency;
  std::uint64_t total = 0;
  for (int l = 1; l <= bound; ++l) {
    if (l > 1) power = power * adjacency;
    for (Eigen::Index i = 0; i < n; ++i) {
      for (Eigen::Index j = i + 1; j < n; ++j) total += power(i, j);
    }
  }
  return total;
}

}  // namespace pathlet
