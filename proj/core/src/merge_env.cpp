#include "pathlet/merge_env.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "pathlet/error.hpp"

namespace pathlet {

std::string_view to_string(Variant v) {
  switch (v) {
    case Variant::kStandard: return "standard";
    case Variant::kNoRepresentability: return "NR";
    case Variant::kUnweighted: return "UNW";
  }
  return "standard";
}

Variant parse_variant(std::string_view text) {
  if (text == "standard") return Variant::kStandard;
  if (text == "NR" || text == "nr") return Variant::kNoRepresentability;
  if (text == "UNW" || text == "unw") return Variant::kUnweighted;
  throw Error(ErrorCode::kConfig, "unknown variant '" + std::string(text) + "'");
}

std::string_view to_string(StateMode m) {
  return m == StateMode::kBase ? "base" : "enhanced";
}

StateMode parse_state_mode(std::string_view text) {
  if (text == "base") return StateMode::kBase;
  if (text == "enhanced") return StateMode::kEnhanced;
  throw Error(ErrorCode::kConfig,
              "unknown state mode '" + std::string(text) + "'");
}

std::string_view to_string(Termination t) {
  switch (t) {
    case Termination::kLossExceeded: return "loss_exceeded";
    case Termination::kMuBelow: return "mu_below";
    case Termination::kExhausted: return "exhausted";
  }
  return "";
}

void validate(const EnvConfig& config) {
  if (config.k <= 0) throw Error(ErrorCode::kConfig, "k must be positive");
  if (!(config.max_loss >= 0.0 && config.max_loss <= 1.0)) {
    throw Error(ErrorCode::kConfig, "M must lie in [0,1]");
  }
  if (!(config.mu_threshold >= 0.0 && config.mu_threshold <= 1.0)) {
    throw Error(ErrorCode::kConfig, "mu_threshold must lie in [0,1]");
  }
  if (config.n_max_neighbors <= 0) {
    throw Error(ErrorCode::kConfig, "n_max_neighbors must be positive");
  }
  validate(config.reward);
}

MergeEnvironment::MergeEnvironment(
    EnvConfig config, std::shared_ptr<const PathletGraph> graph_template)
    : config_(std::move(config)), template_(std::move(graph_template)),
      graph_(*template_) {
  validate(config_);
  // The scalarizer always sees the environment's thresholds.
  config_.reward.max_loss = config_.max_loss;
  config_.reward.mu_threshold = config_.mu_threshold;
}

int MergeEnvironment::feature_dim() const {
  return config_.state_mode == StateMode::kBase ? 4
                                                : 5 + config_.n_max_neighbors;
}

EnvState MergeEnvironment::reset() { return reset(config_.rng_seed); }

EnvState MergeEnvironment::reset(std::uint64_t seed) {
  graph_ = *template_;
  if (graph_.live_count() == 0) {
    throw Error(ErrorCode::kUsage, "cannot start an episode on an empty graph");
  }
  rng_.seed(seed);
  unprocessed_.clear();
  pool_pos_.assign(graph_.all_pathlets().size(), -1);
  for (PathletId id : graph_.live_pathlets()) {
    if (!graph_.processed(id)) pool(id);
  }
  done_ = false;
  termination_.reset();
  episode_return_ = 0.0;
  steps_ = 0;
  trace_.clear();
  current_ = -1;
  initial_phi_ = 1.0;
  initial_phi_ = observation().phi;
  if (initial_phi_ <= 0.0) initial_phi_ = 1.0;
  pick_random_current();
  return observation();
}

void MergeEnvironment::pool(PathletId id) {
  if (PathletId(pool_pos_.size()) <= id) pool_pos_.resize(id + 1, -1);
  pool_pos_[id] = int(unprocessed_.size());
  unprocessed_.push_back(id);
}

void MergeEnvironment::unpool(PathletId id) {
  const int pos = pool_pos_[id];
  if (pos < 0) return;
  const PathletId last = unprocessed_.back();
  unprocessed_[pos] = last;
  pool_pos_[last] = pos;
  unprocessed_.pop_back();
  pool_pos_[id] = -1;
}

void MergeEnvironment::pick_random_current() {
  if (unprocessed_.empty()) {
    current_ = -1;
    return;
  }
  std::uniform_int_distribution<std::size_t> pick(0, unprocessed_.size() - 1);
  current_ = unprocessed_[pick(rng_)];
}

void MergeEnvironment::force_current(PathletId id) {
  if (done_) throw Error(ErrorCode::kUsage, "episode is over");
  if (!graph_.is_live(id) || graph_.processed(id)) {
    throw Error(ErrorCode::kLookup, "pathlet " + std::to_string(id) +
                                        " is not a live unprocessed pathlet");
  }
  current_ = id;
}

double MergeEnvironment::pathlet_weight(PathletId id) const {
  return config_.variant == Variant::kUnweighted ? 1.0 : graph_.weight(id);
}

std::vector<PathletId> MergeEnvironment::eligible_neighbors(PathletId id) const {
  std::vector<PathletId> out;
  for (PathletId q : graph_.neighbors(id)) {
    if (!graph_.processed(q) && graph_.mergeable(id, q)) out.push_back(q);
  }
  std::vector<std::pair<double, PathletId>> keyed;
  keyed.reserve(out.size());
  for (PathletId q : out) keyed.emplace_back(pathlet_weight(q), q);
  std::sort(keyed.begin(), keyed.end(), [](const auto& x, const auto& y) {
    if (x.first != y.first) return x.first > y.first;
    return x.second < y.second;
  });
  out.clear();
  for (std::size_t i = 0;
       i < keyed.size() && i < std::size_t(config_.n_max_neighbors); ++i) {
    out.push_back(keyed[i].second);
  }
  return out;
}

std::vector<bool> MergeEnvironment::valid_actions() const {
  std::vector<bool> valid(action_count(), false);
  valid[0] = true;
  if (done_ || current_ < 0) return valid;
  const auto eligible = eligible_neighbors(current_);
  const int len = graph_.pathlet(current_).length();
  for (std::size_t j = 0; j < eligible.size(); ++j) {
    if (len + graph_.pathlet(eligible[j]).length() <= config_.k) {
      valid[j + 1] = true;
    }
  }
  return valid;
}

EnvState MergeEnvironment::observation() const {
  EnvState s;
  s.size = double(graph_.live_count());
  const auto& trajs = graph_.trajectories();
  std::size_t alive = 0;
  long long rep_total = 0;
  double mu_total = 0.0;
  for (const auto& t : trajs) {
    if (!t.alive) continue;
    ++alive;
    rep_total += static_cast<long long>(t.representation.size());
    mu_total += t.representability();
  }
  if (trajs.empty()) {
    s.phi = 0.0;
    s.loss = 0.0;
    s.mu_bar = 1.0;
  } else {
    s.loss = double(trajs.size() - alive) / double(trajs.size());
    s.phi = alive ? double(rep_total) / double(alive) : 0.0;
    s.mu_bar = alive ? mu_total / double(alive) : 0.0;
  }
  if (config_.state_mode == StateMode::kEnhanced) {
    s.neighbor_weights.assign(config_.n_max_neighbors, 0.0);
    if (current_ >= 0 && graph_.is_live(current_)) {
      s.current_weight = pathlet_weight(current_);
      const auto eligible = eligible_neighbors(current_);
      for (std::size_t j = 0; j < eligible.size(); ++j) {
        s.neighbor_weights[j] = pathlet_weight(eligible[j]);
      }
    }
  }
  return s;
}

MetricSnapshot MergeEnvironment::snapshot() const {
  const EnvState s = observation();
  MetricSnapshot m;
  if (config_.normalize_reward_inputs) {
    m.size_norm = s.size / double(graph_.initial_count());
    m.phi_norm = s.phi / initial_phi_;
  } else {
    m.size_norm = s.size;
    m.phi_norm = s.phi;
  }
  m.loss = s.loss;
  m.mu_bar = s.mu_bar;
  return m;
}

std::vector<double> MergeEnvironment::features() const {
  return features(observation());
}

std::vector<double> MergeEnvironment::features(const EnvState& s) const {
  std::vector<double> f;
  f.reserve(feature_dim());
  f.push_back(s.size / double(graph_.initial_count()));
  f.push_back(s.phi / initial_phi_);
  f.push_back(s.loss);
  f.push_back(s.mu_bar);
  if (config_.state_mode == StateMode::kEnhanced) {
    f.push_back(s.current_weight);
    for (int j = 0; j < config_.n_max_neighbors; ++j) {
      f.push_back(j < int(s.neighbor_weights.size()) ? s.neighbor_weights[j]
                                                     : 0.0);
    }
  }
  return f;
}

std::optional<Termination> MergeEnvironment::check_termination(
    bool exhausted) const {
  const EnvState s = observation();
  if (s.loss > config_.max_loss) return Termination::kLossExceeded;
  if (s.mu_bar < config_.mu_threshold) return Termination::kMuBelow;
  if (exhausted) return Termination::kExhausted;
  return std::nullopt;
}

StepResult MergeEnvironment::step(int action) {
  if (done_) throw Error(ErrorCode::kUsage, "step called after episode end");
  if (action < 0 || action > config_.n_max_neighbors) {
    throw Error(ErrorCode::kUsage,
                "action " + std::to_string(action) + " out of range");
  }
  const MetricSnapshot prev = snapshot();
  StepResult result;

  std::optional<PathletId> partner;
  if (action > 0) {
    const auto eligible = eligible_neighbors(current_);
    if (std::size_t(action) <= eligible.size()) {
      const PathletId q = eligible[action - 1];
      if (graph_.pathlet(current_).length() + graph_.pathlet(q).length() <=
          config_.k) {
        partner = q;
      }
    }
    result.info.action_was_valid = partner.has_value();
  }

  bool exhausted = false;
  if (partner) {
    const PartialLoss policy = config_.variant == Variant::kNoRepresentability
                                   ? PartialLoss::kDropTrajectory
                                   : PartialLoss::kDropPathlet;
    unpool(current_);
    unpool(*partner);
    const MergeOutcome outcome = graph_.merge(current_, *partner, policy);
    pool(outcome.merged);
    current_ = outcome.merged;
    result.info.merged_id = outcome.merged;
  } else {
    graph_.mark_processed(current_);
    unpool(current_);
    pick_random_current();
    exhausted = current_ < 0;
  }

  const MetricSnapshot curr = snapshot();
  result.reward = step_reward(config_.reward, prev, curr);
  result.info.termination_reason = check_termination(exhausted);
  result.done = result.info.termination_reason.has_value();
  if (result.done && config_.reward.kind == ScalarizerKind::kDynamic &&
      config_.reward.terminal_adjustment) {
    result.reward += dynamic_terminal_adjustment(
        curr, config_.max_loss, config_.mu_threshold,
        config_.reward.terminal_bonus_magnitude);
  }
  done_ = result.done;
  termination_ = result.info.termination_reason;
  result.observation = observation();
  episode_return_ += result.reward;
  ++steps_;
  if (trace_enabled_) {
    trace_.push_back(TraceRow{steps_, action, result.info.action_was_valid,
                              result.observation, result.reward,
                              result.info.termination_reason});
  }
  return result;
}

}  // namespace pathlet
