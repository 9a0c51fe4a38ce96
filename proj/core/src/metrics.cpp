#include "pathlet/metrics.hpp"

#include <algorithm>
#include <numeric>
#include <random>
#include <string>

#include "pathlet/error.hpp"

namespace pathlet {

DictionaryReport report(const PathletGraph& graph,
                        std::optional<EnvConfig> config) {
  DictionaryReport r;
  r.size = graph.live_count();
  for (PathletId id : graph.live_pathlets()) {
    ++r.length_histogram[graph.pathlet(id).length()];
  }
  const auto& trajs = graph.trajectories();
  std::size_t alive = 0;
  long long pieces = 0;
  double mu_sum = 0.0;
  for (const auto& t : trajs) {
    int covered = 0;
    for (const auto& entry : t.representation) {
      covered += graph.pathlet(entry.pathlet).length();
    }
    r.representability.emplace_back(covered, t.initial_length);
    if (covered == 0) continue;
    ++alive;
    pieces += static_cast<long long>(t.representation.size());
    mu_sum += double(covered) / double(t.initial_length);
  }
  if (!trajs.empty()) {
    r.loss = double(trajs.size() - alive) / double(trajs.size());
    r.phi = alive ? double(pieces) / double(alive) : 0.0;
    r.mu_bar = alive ? mu_sum / double(alive) : 0.0;
  }
  if (config) {
    r.mu_bar_applicable = config->variant != Variant::kNoRepresentability;
  }
  r.config_echo = std::move(config);
  return r;
}

DictionaryIndex::DictionaryIndex(
    std::size_t edge_count, const std::vector<std::vector<EdgeId>>& pathlets)
    : pathlets_(pathlets), owner_(edge_count, -1), position_(edge_count, -1) {
  for (std::size_t p = 0; p < pathlets_.size(); ++p) {
    for (std::size_t j = 0; j < pathlets_[p].size(); ++j) {
      const EdgeId e = pathlets_[p][j];
      if (e < 0 || std::size_t(e) >= edge_count) {
        throw Error(ErrorCode::kValidation, "pathlet references unknown segment");
      }
      if (owner_[e] != -1) {
        throw Error(ErrorCode::kValidation,
                    "segment " + std::to_string(e) +
                        " belongs to more than one pathlet");
      }
      owner_[e] = int(p);
      position_[e] = int(j);
    }
  }
}

Coverage DictionaryIndex::coverage(const std::vector<EdgeId>& walk,
                                   const std::vector<bool>* enabled) const {
  Coverage c;
  c.total = int(walk.size());
  const auto n = walk.size();
  std::size_t i = 0;
  while (i < n) {
    const int p = owner_[walk[i]];
    if (p < 0 || (enabled && !(*enabled)[p])) {
      ++i;
      continue;
    }
    const auto& edges = pathlets_[p];
    const std::size_t len = edges.size();
    bool match = false;
    if (i + len <= n) {
      if (position_[walk[i]] == 0) {
        match = std::equal(edges.begin(), edges.end(), walk.begin() + i);
      }
      if (!match && position_[walk[i]] == int(len) - 1) {
        match = std::equal(edges.rbegin(), edges.rend(), walk.begin() + i);
      }
    }
    if (match) {
      c.covered += int(len);
      ++c.pieces;
      i += len;
    } else {
      ++i;
    }
  }
  return c;
}

std::vector<std::vector<EdgeId>> dictionary_edges(const PathletGraph& graph) {
  std::vector<std::vector<EdgeId>> out;
  for (PathletId id : graph.live_pathlets()) {
    out.push_back(graph.pathlet(id).edges);
  }
  return out;
}

DictionaryReport report_from_edges(
    const RoadNetwork& net, const std::vector<std::vector<EdgeId>>& pathlets,
    const std::vector<TrajectoryPath>& trajs) {
  DictionaryIndex index(net.edge_count(), pathlets);
  DictionaryReport r;
  r.size = pathlets.size();
  for (const auto& p : pathlets) ++r.length_histogram[int(p.size())];
  std::size_t alive = 0;
  long long pieces = 0;
  double mu_sum = 0.0;
  for (const auto& t : trajs) {
    const Coverage c = index.coverage(t.edges);
    r.representability.emplace_back(c.covered, c.total);
    if (c.covered == 0) continue;
    ++alive;
    pieces += c.pieces;
    mu_sum += c.representability();
  }
  if (!trajs.empty()) {
    r.loss = double(trajs.size() - alive) / double(trajs.size());
    r.phi = alive ? double(pieces) / double(alive) : 0.0;
    r.mu_bar = alive ? mu_sum / double(alive) : 0.0;
  }
  return r;
}

namespace {

std::vector<std::size_t> sample_order(std::size_t n, std::uint64_t seed) {
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::mt19937_64 rng(seed);
  std::shuffle(order.begin(), order.end(), rng);
  return order;
}

double fraction_with_prefix(const DictionaryIndex& index,
                            const std::vector<std::size_t>& order,
                            std::size_t n,
                            const std::vector<TrajectoryPath>& held_out,
                            double mu_cutoff) {
  std::vector<bool> enabled(index.size(), false);
  for (std::size_t i = 0; i < n && i < order.size(); ++i) enabled[order[i]] = true;
  std::size_t ok = 0;
  for (const auto& t : held_out) {
    if (index.coverage(t.edges, &enabled).representability() >= mu_cutoff) ++ok;
  }
  return double(ok) / double(held_out.size());
}

}  // namespace

double reconstructable_fraction(
    std::size_t edge_count, const std::vector<std::vector<EdgeId>>& dictionary,
    const std::vector<TrajectoryPath>& held_out, std::uint64_t seed,
    std::size_t n, double mu_cutoff) {
  if (held_out.empty()) {
    throw Error(ErrorCode::kUsage, "held-out trajectory set is empty");
  }
  DictionaryIndex index(edge_count, dictionary);
  return fraction_with_prefix(index, sample_order(dictionary.size(), seed), n,
                              held_out, mu_cutoff);
}

ReconstructionCurve reconstruction_curve(
    std::size_t edge_count, const std::vector<std::vector<EdgeId>>& dictionary,
    const std::vector<TrajectoryPath>& held_out, std::uint64_t seed,
    double mu_cutoff) {
  if (held_out.empty()) {
    throw Error(ErrorCode::kUsage, "held-out trajectory set is empty");
  }
  DictionaryIndex index(edge_count, dictionary);
  const auto order = sample_order(dictionary.size(), seed);
  ReconstructionCurve curve;
  curve.mu_cutoff = mu_cutoff;
  curve.seed = seed;
  for (int tenth = 1; tenth <= 10; ++tenth) {
    const std::size_t n = (std::size_t(tenth) * dictionary.size()) / 10;
    curve.sample_fractions.push_back(tenth / 10.0);
    curve.reconstructable_fraction.push_back(
        fraction_with_prefix(index, order, n, held_out, mu_cutoff));
  }
  return curve;
}

std::string_view to_string(SweepParameter p) {
  switch (p) {
    case SweepParameter::kAlpha1: return "alpha1";
    case SweepParameter::kAlpha2: return "alpha2";
    case SweepParameter::kAlpha3: return "alpha3";
    case SweepParameter::kAlpha4: return "alpha4";
    case SweepParameter::kK: return "k";
    case SweepParameter::kMuThreshold: return "mu_threshold";
    case SweepParameter::kMaxLoss: return "M";
  }
  return "";
}

SweepParameter parse_sweep_parameter(std::string_view text) {
  for (auto p : {SweepParameter::kAlpha1, SweepParameter::kAlpha2,
                 SweepParameter::kAlpha3, SweepParameter::kAlpha4,
                 SweepParameter::kK, SweepParameter::kMuThreshold,
                 SweepParameter::kMaxLoss}) {
    if (to_string(p) == text) return p;
  }
  throw Error(ErrorCode::kConfig,
              "unknown sweep parameter '" + std::string(text) + "'");
}

EnvConfig apply_sweep_value(EnvConfig base, SweepParameter p, double value) {
  auto set_alpha = [&](std::size_t i) {
    if (!(value >= 0.0 && value <= 1.0)) {
      throw Error(ErrorCode::kConfig, "swept alpha must lie in [0,1]");
    }
    for (std::size_t j = 0; j < 4; ++j) {
      base.reward.alphas[j] = j == i ? value : (1.0 - value) / 3.0;
    }
  };
  switch (p) {
    case SweepParameter::kAlpha1: set_alpha(0); break;
    case SweepParameter::kAlpha2: set_alpha(1); break;
    case SweepParameter::kAlpha3: set_alpha(2); break;
    case SweepParameter::kAlpha4: set_alpha(3); break;
    case SweepParameter::kK:
      if (value < 1.0 || value != double(int(value))) {
        throw Error(ErrorCode::kConfig, "k must be a positive integer");
      }
      base.k = int(value);
      break;
    case SweepParameter::kMuThreshold: base.mu_threshold = value; break;
    case SweepParameter::kMaxLoss: base.max_loss = value; break;
  }
  base.reward.max_loss = base.max_loss;
  base.reward.mu_threshold = base.mu_threshold;
  validate(base);
  return base;
}

std::vector<SweepRow> sweep(std::shared_ptr<const PathletGraph> graph,
                            const EnvConfig& base_env,
                            const TrainConfig& train, SweepParameter parameter,
                            const std::vector<double>& values) {
  std::vector<EnvConfig> cells;
  for (double v : values) cells.push_back(apply_sweep_value(base_env, parameter, v));
  std::vector<SweepRow> rows;
  for (std::size_t i = 0; i < cells.size(); ++i) {
    MergeEnvironment env(cells[i], graph);
    TrainingResult result = run_training(env, train);
    SweepRow row;
    row.parameter = parameter;
    row.value = values[i];
    row.report = report(result.dictionary, cells[i]);
    row.returns = std::move(result.returns);
    row.termination = result.final_episode.termination;
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace pathlet
