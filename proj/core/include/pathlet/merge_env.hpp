#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <random>
#include <string_view>
#include <vector>

#include "pathlet/pathlet_graph.hpp"
#include "pathlet/reward.hpp"

namespace pathlet {

// Ablation switches on the environment's semantics.
enum class Variant {
  kStandard,
  kNoRepresentability,  // NR: partial loss discards the whole trajectory
  kUnweighted,          // UNW: every pathlet weighs 1
};

enum class StateMode { kBase, kEnhanced };

std::string_view to_string(Variant v);
Variant parse_variant(std::string_view text);
std::string_view to_string(StateMode m);
StateMode parse_state_mode(std::string_view text);

struct EnvConfig {
  int k = 10;
  double max_loss = 0.25;
  double mu_threshold = 0.80;
  Variant variant = Variant::kStandard;
  StateMode state_mode = StateMode::kBase;
  int n_max_neighbors = 8;
  // Feed size and phi to the scalarizer relative to their initial values.
  bool normalize_reward_inputs = true;
  ScalarizerConfig reward;
  std::uint64_t rng_seed = 0;
};

// Throws Error(kConfig) on out-of-range values. Also checks the scalarizer.
void validate(const EnvConfig& config);

struct EnvState {
  double size = 0.0;      // live pathlet count
  double phi = 0.0;       // mean representation length over alive trajectories
  double loss = 0.0;      // fraction of trajectories that died
  double mu_bar = 1.0;    // mean representability over alive trajectories
  double current_weight = 0.0;          // enhanced mode only
  std::vector<double> neighbor_weights; // enhanced mode only
};

enum class Termination { kLossExceeded, kMuBelow, kExhausted };
std::string_view to_string(Termination t);

struct StepInfo {
  bool action_was_valid = true;
  std::optional<PathletId> merged_id;
  std::optional<Termination> termination_reason;
};

struct StepResult {
  EnvState observation;
  double reward = 0.0;
  bool done = false;
  StepInfo info;
};

struct TraceRow {
  int step = 0;
  int action = 0;
  bool valid = true;
  EnvState state;
  double reward = 0.0;
  std::optional<Termination> termination;
};

// Bottom-up merge loop as a reinforcement-learning environment. Action 0
// keeps the current pathlet; action j >= 1 merges it with the j-th eligible
// neighbor. Actions that name no neighbor, or whose merge would exceed k,
// behave as keep.
class MergeEnvironment {
 public:
  MergeEnvironment(EnvConfig config,
                   std::shared_ptr<const PathletGraph> graph_template);

  // Starts a fresh episode from the template. `seed` overrides the config
  // seed for this episode. Throws Error(kUsage) on an empty pathlet graph.
  EnvState reset();
  EnvState reset(std::uint64_t seed);

  // Throws Error(kUsage) after termination or for an action outside
  // [0, n_max_neighbors].
  StepResult step(int action);

  // Unprocessed live neighbors of `id` that can legally be joined to it,
  // ordered by descending weight then ascending id, truncated to
  // n_max_neighbors.
  std::vector<PathletId> eligible_neighbors(PathletId id) const;

  // valid[j] for every action; valid[0] is always true.
  std::vector<bool> valid_actions() const;

  // Test hook: makes an unprocessed live pathlet current.
  void force_current(PathletId id);

  int action_count() const { return 1 + config_.n_max_neighbors; }
  int feature_dim() const;

  const EnvConfig& config() const { return config_; }
  const PathletGraph& graph() const { return graph_; }
  PathletId current() const { return current_; }
  bool done() const { return done_; }
  std::optional<Termination> termination() const { return termination_; }

  EnvState observation() const;
  MetricSnapshot snapshot() const;
  // Observation flattened and scaled for the Q-network.
  std::vector<double> features() const;
  std::vector<double> features(const EnvState& state) const;

  double initial_phi() const { return initial_phi_; }
  double episode_return() const { return episode_return_; }
  int steps_taken() const { return steps_; }

  void set_trace_enabled(bool enabled) { trace_enabled_ = enabled; }
  const std::vector<TraceRow>& trace() const { return trace_; }

 private:
  double pathlet_weight(PathletId id) const;
  void pick_random_current();
  void unpool(PathletId id);
  void pool(PathletId id);
  std::optional<Termination> check_termination(bool exhausted) const;

  EnvConfig config_;
  std::shared_ptr<const PathletGraph> template_;
  PathletGraph graph_;
  std::mt19937_64 rng_;
  // Unprocessed live pathlets with O(1) removal.
  std::vector<PathletId> unprocessed_;
  std::vector<int> pool_pos_;
  PathletId current_ = -1;
  bool done_ = true;
  std::optional<Termination> termination_;
  double initial_phi_ = 1.0;
  double episode_return_ = 0.0;
  int steps_ = 0;
  bool trace_enabled_ = false;
  std::vector<TraceRow> trace_;
};

}  // namespace pathlet
