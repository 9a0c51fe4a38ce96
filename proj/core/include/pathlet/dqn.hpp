#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <vector>

#include "pathlet/merge_env.hpp"
#include "pathlet/mlp.hpp"

namespace pathlet {

struct Transition {
  std::vector<double> state;
  int action = 0;
  double reward = 0.0;
  std::vector<double> next_state;
  bool done = false;
};

// Fixed-capacity ring of transitions; the oldest entry is overwritten first.
class ReplayBuffer {
 public:
  explicit ReplayBuffer(std::size_t capacity);

  void push(Transition t);
  std::size_t size() const { return entries_.size(); }
  std::size_t capacity() const { return capacity_; }
  // i-th entry counted from the oldest retained one.
  const Transition& at(std::size_t i) const;
  // Uniform with replacement.
  std::vector<const Transition*> sample(std::size_t n,
                                        std::mt19937_64& rng) const;

 private:
  std::size_t capacity_;
  std::size_t cursor_ = 0;
  std::vector<Transition> entries_;
};

struct EpsilonSchedule {
  double start = 1.0;
  double end = 0.05;
  // Fraction of training over which epsilon decays linearly to `end`.
  double decay_fraction = 0.5;

  double at(double progress) const;
};

enum class Policy { kDqn, kRandom };

struct TrainConfig {
  int iterations = 100;
  int episodes_per_iteration = 5;
  int batch_size = 64;
  double gamma = 0.99;
  double learning_rate = 1e-3;
  EpsilonSchedule epsilon;
  int target_sync_interval = 500;
  std::size_t replay_capacity = 100000;
  std::vector<int> hidden_layers{128, 64, 32};
  double dropout = 0.2;
  std::uint64_t rng_seed = 0;
  Policy policy = Policy::kDqn;
};

// Throws Error(kConfig) on out-of-range values.
void validate(const TrainConfig& config);

// Epsilon-greedy over the valid actions. Greedy ties go to the lowest index.
int select_action(const Mlp& net, const std::vector<double>& state,
                  double epsilon, const std::vector<bool>& valid,
                  std::mt19937_64& rng);

// r for terminal transitions, r + gamma * max_a Q_target(s', a) otherwise.
Eigen::VectorXd td_targets(const std::vector<const Transition*>& batch,
                           const Mlp& target_net, double gamma);

// Mean Huber(delta = 1) loss of Q(s, a) against fixed targets, and its
// gradient with respect to the network parameters.
double huber_td_loss(const Mlp& net, const std::vector<const Transition*>& batch,
                     const Eigen::VectorXd& targets,
                     Mlp::Gradients* grads = nullptr,
                     std::mt19937_64* dropout_rng = nullptr);

class DqnAgent {
 public:
  DqnAgent(int state_dim, int action_dim, const TrainConfig& config);

  int act(const std::vector<double>& state, double epsilon,
          const std::vector<bool>& valid);
  void remember(Transition t) { buffer_.push(std::move(t)); }

  // One Adam update on a sampled minibatch; nullopt while the buffer holds
  // fewer than batch_size transitions.
  std::optional<double> train_step();

  const Mlp& online() const { return online_; }
  Mlp& online() { return online_; }
  const Mlp& target() const { return target_; }
  Mlp& target() { return target_; }
  Adam& optimizer() { return adam_; }
  const Adam& optimizer() const { return adam_; }
  const ReplayBuffer& buffer() const { return buffer_; }
  ReplayBuffer& buffer() { return buffer_; }
  long long gradient_steps() const { return gradient_steps_; }
  void set_gradient_steps(long long n) { gradient_steps_ = n; }
  const TrainConfig& config() const { return config_; }

 private:
  TrainConfig config_;
  std::mt19937_64 rng_;
  Mlp online_;
  Mlp target_;
  Adam adam_;
  ReplayBuffer buffer_;
  long long gradient_steps_ = 0;
};

struct IterationReturns {
  int iteration = 0;
  double mean = 0.0;
  double min = 0.0;
  double max = 0.0;
};

struct EpisodeOutcome {
  double episode_return = 0.0;
  int steps = 0;
  std::optional<Termination> termination;
};

struct TrainingResult {
  Mlp network;
  std::vector<IterationReturns> returns;
  // Graph at the end of the final greedy episode, or the untouched initial
  // graph when no iterations ran.
  PathletGraph dictionary;
  EpisodeOutcome final_episode;
  std::vector<TraceRow> final_trace;
  long long gradient_steps = 0;
  // Set for checkpointing; empty for the random policy.
  std::optional<DqnAgent> agent;
};

using ProgressFn = std::function<void(const IterationReturns&)>;

// Seed of the e-th training episode derived from the environment seed.
std::uint64_t episode_seed(std::uint64_t base, std::uint64_t episode);

// Runs iterations x episodes of epsilon-greedy collection with a gradient
// step after every transition once the buffer is warm, then one greedy
// episode from the environment's configured seed. With Policy::kRandom every
// episode, including the final one, acts uniformly over valid actions and no
// network is trained.
TrainingResult run_training(MergeEnvironment& env, const TrainConfig& config,
                            const ProgressFn& progress = {});

// Steps an already-reset environment with uniform valid actions until done.
EpisodeOutcome random_policy_episode(MergeEnvironment& env,
                                     std::mt19937_64& rng);

// Steps an already-reset environment with the greedy policy of `net`.
EpisodeOutcome greedy_episode(MergeEnvironment& env, const Mlp& net);

}  // namespace pathlet
