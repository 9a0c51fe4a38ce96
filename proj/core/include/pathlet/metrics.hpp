#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string_view>
#include <vector>

#include "pathlet/dqn.hpp"
#include "pathlet/merge_env.hpp"
#include "pathlet/pathlet_graph.hpp"

namespace pathlet {

struct DictionaryReport {
  std::size_t size = 0;
  double phi = 0.0;
  double loss = 0.0;
  double mu_bar = 1.0;
  // False for the NR variant, where every surviving trajectory is complete.
  bool mu_bar_applicable = true;
  std::map<int, int> length_histogram;
  // Per trajectory, in input order: covered and initial pathlet length.
  std::vector<std::pair<int, int>> representability;
  std::optional<EnvConfig> config_echo;
};

// Recomputes the four dictionary metrics from the pathlets referenced by each
// trajectory's representation rather than from tracked counters.
DictionaryReport report(const PathletGraph& graph,
                        std::optional<EnvConfig> config = std::nullopt);

// Coverage of a trajectory by a set of edge-disjoint pathlets: a position of
// the walk counts as covered when the pathlet holding its segment is in the
// set and the walk traverses that whole pathlet contiguously there.
struct Coverage {
  int covered = 0;
  int total = 0;
  int pieces = 0;

  double representability() const {
    return total == 0 ? 0.0 : double(covered) / double(total);
  }
};

class DictionaryIndex {
 public:
  // `pathlets` are edge sequences; each segment may appear in at most one.
  // Throws Error(kValidation) otherwise.
  DictionaryIndex(std::size_t edge_count,
                  const std::vector<std::vector<EdgeId>>& pathlets);

  Coverage coverage(const std::vector<EdgeId>& walk,
                    const std::vector<bool>* enabled = nullptr) const;
  std::size_t size() const { return pathlets_.size(); }

 private:
  std::vector<std::vector<EdgeId>> pathlets_;
  std::vector<int> owner_;     // segment -> pathlet index, -1 if uncovered
  std::vector<int> position_;  // segment -> index within its pathlet
};

// Live pathlets of `graph` as edge sequences, in ascending id order.
std::vector<std::vector<EdgeId>> dictionary_edges(const PathletGraph& graph);

// Report for a dictionary given only as edge sequences, evaluated against
// raw trajectories by contiguous coverage.
DictionaryReport report_from_edges(
    const RoadNetwork& net, const std::vector<std::vector<EdgeId>>& pathlets,
    const std::vector<TrajectoryPath>& trajs);

struct ReconstructionCurve {
  std::vector<double> sample_fractions;
  std::vector<double> reconstructable_fraction;
  double mu_cutoff = 0.75;
  std::uint64_t seed = 0;
};

// For x = 0.1, ..., 1.0 keeps the first floor(x * |S|) pathlets of one seeded
// shuffle, so every sample contains the smaller ones. Throws Error(kUsage)
// on an empty held-out set.
ReconstructionCurve reconstruction_curve(
    std::size_t edge_count, const std::vector<std::vector<EdgeId>>& dictionary,
    const std::vector<TrajectoryPath>& held_out, std::uint64_t seed,
    double mu_cutoff = 0.75);

// Fraction of `held_out` reconstructable from the first `n` pathlets of the
// seeded shuffle used by reconstruction_curve.
double reconstructable_fraction(
    std::size_t edge_count, const std::vector<std::vector<EdgeId>>& dictionary,
    const std::vector<TrajectoryPath>& held_out, std::uint64_t seed,
    std::size_t n, double mu_cutoff = 0.75);

// Number of distinct undirected simple paths with at least one segment (and
// at most `max_length`, if given) by exhaustive enumeration. Throws
// Error(kBudgetExceeded) once the count passes `budget`.
std::uint64_t memory_estimate_topdown(const RoadNetwork& net,
                                      std::optional<int> max_length = {},
                                      std::uint64_t budget = 50'000'000);

// Initial unit pathlets of the bottom-up scheme: one per segment.
std::uint64_t memory_estimate_bottomup(const RoadNetwork& net);

// Sum over l = 1..max_length of the off-diagonal upper-triangle entries of
// A^l: node-pair walk counts from adjacency powers. Defaults to the segment
// count as the length bound.
std::uint64_t count_walks_by_powers(const RoadNetwork& net,
                                    std::optional<int> max_length = {});

enum class SweepParameter {
  kAlpha1,
  kAlpha2,
  kAlpha3,
  kAlpha4,
  kK,
  kMuThreshold,
  kMaxLoss,
};

std::string_view to_string(SweepParameter p);
SweepParameter parse_sweep_parameter(std::string_view text);

// Copy of `base` with one parameter set. Sweeping alpha_i sets the other
// three to (1 - alpha_i) / 3. Throws Error(kConfig) for out-of-range values.
EnvConfig apply_sweep_value(EnvConfig base, SweepParameter p, double value);

struct SweepRow {
  SweepParameter parameter = SweepParameter::kK;
  double value = 0.0;
  DictionaryReport report;
  std::vector<IterationReturns> returns;
  std::optional<Termination> termination;
};

// Trains (or runs the configured policy) once per value and reports the
// resulting dictionary. Each cell depends only on its config and seeds.
std::vector<SweepRow> sweep(std::shared_ptr<const PathletGraph> graph,
                            const EnvConfig& base_env,
                            const TrainConfig& train, SweepParameter parameter,
                            const std::vector<double>& values);

}  // namespace pathlet
