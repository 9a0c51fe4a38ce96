#include "pathlet/dqn.hpp"

#include <algorithm>
#include <limits>

#include "pathlet/error.hpp"

namespace pathlet {

ReplayBuffer::ReplayBuffer(std::size_t capacity) : capacity_(capacity) {
  if (capacity_ == 0) {
    throw Error(ErrorCode::kConfig, "replay capacity must be positive");
  }
}

void ReplayBuffer::push(Transition t) {
  if (entries_.size() < capacity_) {
    entries_.push_back(std::move(t));
  } else {
    entries_[cursor_] = std::move(t);
  }
  cursor_ = (cursor_ + 1) % capacity_;
}

const Transition& ReplayBuffer::at(std::size_t i) const {
  if (i >= entries_.size()) {
    throw Error(ErrorCode::kLookup, "replay index out of range");
  }
  if (entries_.size() < capacity_) return entries_[i];
  return entries_[(cursor_ + i) % capacity_];
}

std::vector<const Transition*> ReplayBuffer::sample(
    std::size_t n, std::mt19937_64& rng) const {
  std::vector<const Transition*> out;
  if (entries_.empty()) return out;
  std::uniform_int_distribution<std::size_t> pick(0, entries_.size() - 1);
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) out.push_back(&entries_[pick(rng)]);
  return out;
}

double EpsilonSchedule::at(double progress) const {
  if (decay_fraction <= 0.0) return end;
  const double frac = std::clamp(progress / decay_fraction, 0.0, 1.0);
  if (frac >= 1.0) return end;
  return start + (end - start) * frac;
}

void validate(const TrainConfig& c) {
  auto fail = [](const char* msg) { throw Error(ErrorCode::kConfig, msg); };
  if (c.iterations < 0 || c.episodes_per_iteration <= 0) {
    fail("iterations must be >= 0 and episodes per iteration positive");
  }
  if (c.batch_size <= 0) fail("batch size must be positive");
  if (!(c.gamma >= 0.0 && c.gamma <= 1.0)) fail("gamma must lie in [0,1]");
  if (!(c.learning_rate > 0.0)) fail("learning rate must be positive");
  for (double e : {c.epsilon.start, c.epsilon.end}) {
    if (!(e >= 0.0 && e <= 1.0)) fail("epsilon bounds must lie in [0,1]");
  }
  if (c.target_sync_interval <= 0) fail("target sync interval must be positive");
  if (c.replay_capacity == 0) fail("replay capacity must be positive");
  if (!(c.dropout >= 0.0 && c.dropout < 1.0)) fail("dropout must lie in [0,1)");
}

int select_action(const Mlp& net, const std::vector<double>& state,
                  double epsilon, const std::vector<bool>& valid,
                  std::mt19937_64& rng) {
  std::vector<int> candidates;
  for (int a = 0; a < int(valid.size()); ++a) {
    if (valid[a]) candidates.push_back(a);
  }
  if (candidates.empty()) return 0;
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  if (epsilon > 0.0 && unit(rng) < epsilon) {
    std::uniform_int_distribution<std::size_t> pick(0, candidates.size() - 1);
    return candidates[pick(rng)];
  }
  const Eigen::VectorXd q = net.forward(Eigen::VectorXd(
      Eigen::Map<const Eigen::VectorXd>(state.data(), Eigen::Index(state.size()))));
  int best = candidates.front();
  for (int a : candidates) {
    if (q(a) > q(best)) best = a;
  }
  return best;
}

namespace {

Eigen::MatrixXd stack_states(const std::vector<const Transition*>& batch,
                             bool next) {
  const auto& first = next ? batch.front()->next_state : batch.front()->state;
  Eigen::MatrixXd x(Eigen::Index(first.size()), Eigen::Index(batch.size()));
  for (std::size_t i = 0; i < batch.size(); ++i) {
    const auto& s = next ? batch[i]->next_state : batch[i]->state;
    x.col(Eigen::Index(i)) =
        Eigen::Map<const Eigen::VectorXd>(s.data(), Eigen::Index(s.size()));
  }
  return x;
}

}  // namespace

Eigen::VectorXd td_targets(const std::vector<const Transition*>& batch,
                           const Mlp& target_net, double gamma) {
  Eigen::VectorXd y(Eigen::Index(batch.size()));
  if (batch.empty()) return y;
  const Eigen::MatrixXd q_next = target_net.forward_batch(stack_states(batch, true));
  for (std::size_t i = 0; i < batch.size(); ++i) {
    const Transition& t = *batch[i];
    y(Eigen::Index(i)) =
        t.done ? t.reward
               : t.reward + gamma * q_next.col(Eigen::Index(i)).maxCoeff();
  }
  return y;
}

double huber_td_loss(const Mlp& net, const std::vector<const Transition*>& batch,
                     const Eigen::VectorXd& targets, Mlp::Gradients* grads,
                     std::mt19937_64* dropout_rng) {
  const auto n = Eigen::Index(batch.size());
  Mlp::ForwardCache cache;
  const Eigen::MatrixXd q = net.forward_train(stack_states(batch, false), cache,
                                              dropout_rng);
  Eigen::MatrixXd grad_out = Eigen::MatrixXd::Zero(q.rows(), q.cols());
  double loss = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    const int a = batch[std::size_t(i)]->action;
    const double residual = q(a, i) - targets(i);
    loss += huber(residual);
    grad_out(a, i) = huber_derivative(residual) / double(n);
  }
  if (grads) *grads = net.backward(cache, grad_out);
  return loss / double(n);
}

DqnAgent::DqnAgent(int state_dim, int action_dim, const TrainConfig& config)
    : config_(config), rng_(config.rng_seed), buffer_(config.replay_capacity) {
  std::vector<int> sizes{state_dim};
  sizes.insert(sizes.end(), config_.hidden_layers.begin(),
               config_.hidden_layers.end());
  sizes.push_back(action_dim);
  online_ = Mlp(sizes, config_.dropout, rng_);
  target_ = online_;
  adam_ = Adam(online_, config_.learning_rate);
}

int DqnAgent::act(const std::vector<double>& state, double epsilon,
                  const std::vector<bool>& valid) {
  return select_action(online_, state, epsilon, valid, rng_);
}

std::optional<double> DqnAgent::train_step() {
  if (buffer_.size() < std::size_t(config_.batch_size)) return std::nullopt;
  const auto batch = buffer_.sample(std::size_t(config_.batch_size), rng_);
  const Eigen::VectorXd targets = td_targets(batch, target_, config_.gamma);
  Mlp::Gradients grads;
  const double loss = huber_td_loss(online_, batch, targets, &grads, &rng_);
  adam_.step(online_, grads);
  ++gradient_steps_;
  if (gradient_steps_ % config_.target_sync_interval == 0) target_ = online_;
  return loss;
}

std::uint64_t episode_seed(std::uint64_t base, std::uint64_t episode) {
  // splitmix64 finalizer over the pair.
  std::uint64_t z = base + 0x9E3779B97F4A7C15ULL * (episode + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

EpisodeOutcome random_policy_episode(MergeEnvironment& env,
                                     std::mt19937_64& rng) {
  while (!env.done()) {
    const auto valid = env.valid_actions();
    std::vector<int> candidates;
    for (int a = 0; a < int(valid.size()); ++a) {
      if (valid[a]) candidates.push_back(a);
    }
    std::uniform_int_distribution<std::size_t> pick(0, candidates.size() - 1);
    env.step(candidates[pick(rng)]);
  }
  return {env.episode_return(), env.steps_taken(), env.termination()};
}

EpisodeOutcome greedy_episode(MergeEnvironment& env, const Mlp& net) {
  std::mt19937_64 unused(0);
  while (!env.done()) {
    env.step(select_action(net, env.features(), 0.0, env.valid_actions(),
                           unused));
  }
  return {env.episode_return(), env.steps_taken(), env.termination()};
}

TrainingResult run_training(MergeEnvironment& env, const TrainConfig& config,
                            const ProgressFn& progress) {
  validate(config);
  DqnAgent agent(env.feature_dim(), env.action_count(), config);
  std::mt19937_64 policy_rng(episode_seed(config.rng_seed, ~0ULL));
  const bool learn = config.policy == Policy::kDqn;
  const double total_episodes =
      double(config.iterations) * double(config.episodes_per_iteration);

  TrainingResult result;
  std::uint64_t episode = 0;
  for (int it = 0; it < config.iterations; ++it) {
    std::vector<double> returns;
    for (int m = 0; m < config.episodes_per_iteration; ++m, ++episode) {
      env.reset(episode_seed(env.config().rng_seed, episode));
      if (!learn) {
        returns.push_back(random_policy_episode(env, policy_rng).episode_return);
        continue;
      }
      const double epsilon = config.epsilon.at(double(episode) / total_episodes);
      while (!env.done()) {
        std::vector<double> state = env.features();
        const int action = agent.act(state, epsilon, env.valid_actions());
        const StepResult step = env.step(action);
        agent.remember(Transition{std::move(state), action, step.reward,
                                  env.features(step.observation), step.done});
        agent.train_step();
      }
      returns.push_back(env.episode_return());
    }
    IterationReturns row;
    row.iteration = it;
    row.mean = 0.0;
    for (double r : returns) row.mean += r;
    row.mean /= double(returns.size());
    row.min = *std::min_element(returns.begin(), returns.end());
    row.max = *std::max_element(returns.begin(), returns.end());
    result.returns.push_back(row);
    if (progress) progress(row);
  }

  env.reset();
  if (config.iterations > 0) {
    env.set_trace_enabled(true);
    result.final_episode = learn ? greedy_episode(env, agent.online())
                                 : random_policy_episode(env, policy_rng);
    result.final_trace = env.trace();
    env.set_trace_enabled(false);
  }
  result.dictionary = env.graph();
  result.network = agent.online();
  result.gradient_steps = agent.gradient_steps();
  if (learn) result.agent.emplace(std::move(agent));
  return result;
}

}  // namespace pathlet
