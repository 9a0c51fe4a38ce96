#include "pathlet/config.hpp"

#include <fstream>
#include <initializer_list>
#include <string>

#include <json.hpp>

#include "pathlet/error.hpp"

namespace pathlet {
namespace {

using nlohmann::json;

void check_keys(const json& obj, std::string_view section,
                std::initializer_list<std::string_view> allowed) {
  if (!obj.is_object()) {
    throw Error(ErrorCode::kConfig,
                "section '" + std::string(section) + "' must be an object");
  }
  for (const auto& item : obj.items()) {
    bool known = false;
    for (auto key : allowed) known = known || item.key() == key;
    if (!known) {
      throw Error(ErrorCode::kConfig, "unknown key '" + item.key() +
                                          "' in section '" +
                                          std::string(section) + "'");
    }
  }
}

template <typename T>
void read(const json& obj, const char* key, T& out) {
  if (obj.contains(key)) out = obj.at(key).get<T>();
}

std::filesystem::path resolve(const std::filesystem::path& base,
                              const std::string& p) {
  std::filesystem::path path(p);
  return path.is_relative() && !path.empty() && !base.empty() ? base / path : path;
}

json env_json(const EnvConfig& c) {
  return json{{"k", c.k},
              {"M", c.max_loss},
              {"mu_threshold", c.mu_threshold},
              {"alphas", c.reward.alphas},
              {"variant", to_string(c.variant)},
              {"state_mode", to_string(c.state_mode)},
              {"n_max_neighbors", c.n_max_neighbors},
              {"normalize_reward_inputs", c.normalize_reward_inputs},
              {"rng_seed", c.rng_seed},
              {"scalarizer",
               {{"kind", to_string(c.reward.kind)},
                {"ideal_point", c.reward.ideal_point},
                {"terminal_adjustment", c.reward.terminal_adjustment},
                {"terminal_bonus_magnitude",
                 c.reward.terminal_bonus_magnitude}}}};
}

}  // namespace

std::string_view to_string(Mode m) {
  switch (m) {
    case Mode::kTrain: return "train";
    case Mode::kEvaluate: return "evaluate";
    case Mode::kSweep: return "sweep";
    case Mode::kMemory: return "memory";
    case Mode::kGenerate: return "generate";
  }
  return "train";
}

Mode parse_mode(std::string_view text) {
  for (auto m : {Mode::kTrain, Mode::kEvaluate, Mode::kSweep, Mode::kMemory,
                 Mode::kGenerate}) {
    if (to_string(m) == text) return m;
  }
  throw Error(ErrorCode::kConfig, "unknown mode '" + std::string(text) + "'");
}

ExperimentConfig parse_experiment_config(std::istream& in,
                                         const std::filesystem::path& base_dir) {
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::kParse, std::string("config: ") + e.what());
  }
  ExperimentConfig c;
  try {
    check_keys(doc, "root",
               {"mode", "seed", "label", "paths", "env", "scalarizer", "train",
                "split_fraction", "world", "sweep", "memory"});
    if (doc.contains("mode")) c.mode = parse_mode(doc.at("mode").get<std::string>());
    read(doc, "seed", c.seed);
    read(doc, "label", c.label);
    read(doc, "split_fraction", c.split_fraction);

    if (doc.contains("paths")) {
      const json& p = doc.at("paths");
      check_keys(p, "paths",
                 {"network_file", "trajectory_file", "output_dir",
                  "dictionary_file"});
      if (p.contains("network_file"))
        c.paths.network_file = resolve(base_dir, p.at("network_file"));
      if (p.contains("trajectory_file"))
        c.paths.trajectory_file = resolve(base_dir, p.at("trajectory_file"));
      if (p.contains("output_dir"))
        c.paths.output_dir = resolve(base_dir, p.at("output_dir"));
      if (p.contains("dictionary_file"))
        c.paths.dictionary_file = resolve(base_dir, p.at("dictionary_file"));
    }
    if (doc.contains("env")) {
      const json& e = doc.at("env");
      check_keys(e, "env",
                 {"k", "M", "mu_threshold", "alphas", "variant", "state_mode",
                  "n_max_neighbors", "normalize_reward_inputs"});
      read(e, "k", c.env.k);
      read(e, "M", c.env.max_loss);
      read(e, "mu_threshold", c.env.mu_threshold);
      read(e, "alphas", c.env.reward.alphas);
      read(e, "n_max_neighbors", c.env.n_max_neighbors);
      read(e, "normalize_reward_inputs", c.env.normalize_reward_inputs);
      if (e.contains("variant"))
        c.env.variant = parse_variant(e.at("variant").get<std::string>());
      if (e.contains("state_mode"))
        c.env.state_mode = parse_state_mode(e.at("state_mode").get<std::string>());
    }
    if (doc.contains("scalarizer")) {
      const json& s = doc.at("scalarizer");
      check_keys(s, "scalarizer",
                 {"kind", "ideal_point", "terminal_adjustment",
                  "terminal_bonus_magnitude"});
      if (s.contains("kind"))
        c.env.reward.kind = parse_scalarizer_kind(s.at("kind").get<std::string>());
      read(s, "ideal_point", c.env.reward.ideal_point);
      read(s, "terminal_adjustment", c.env.reward.terminal_adjustment);
      read(s, "terminal_bonus_magnitude", c.env.reward.terminal_bonus_magnitude);
    }
    if (doc.contains("train")) {
      const json& t = doc.at("train");
      check_keys(t, "train",
                 {"iterations", "episodes_per_iteration", "batch_size", "gamma",
                  "learning_rate", "epsilon", "target_sync_interval",
                  "replay_capacity", "hidden_layers", "dropout", "policy"});
      read(t, "iterations", c.train.iterations);
      read(t, "episodes_per_iteration", c.train.episodes_per_iteration);
      read(t, "batch_size", c.train.batch_size);
      read(t, "gamma", c.train.gamma);
      read(t, "learning_rate", c.train.learning_rate);
      read(t, "target_sync_interval", c.train.target_sync_interval);
      read(t, "replay_capacity", c.train.replay_capacity);
      read(t, "hidden_layers", c.train.hidden_layers);
      read(t, "dropout", c.train.dropout);
      if (t.contains("epsilon")) {
        const json& eps = t.at("epsilon");
        check_keys(eps, "train.epsilon", {"start", "end", "decay_fraction"});
        read(eps, "start", c.train.epsilon.start);
        read(eps, "end", c.train.epsilon.end);
        read(eps, "decay_fraction", c.train.epsilon.decay_fraction);
      }
      if (t.contains("policy")) {
        const auto policy = t.at("policy").get<std::string>();
        if (policy == "dqn") {
          c.train.policy = Policy::kDqn;
        } else if (policy == "random") {
          c.train.policy = Policy::kRandom;
        } else {
          throw Error(ErrorCode::kConfig, "unknown policy '" + policy + "'");
        }
      }
    }
    if (doc.contains("world")) {
      const json& w = doc.at("world");
      check_keys(w, "world",
                 {"grid_width", "grid_height", "n_trajectories",
                  "walk_length_range", "straight_bias"});
      read(w, "grid_width", c.world.grid_width);
      read(w, "grid_height", c.world.grid_height);
      read(w, "n_trajectories", c.world.n_trajectories);
      read(w, "walk_length_range", c.world.walk_length_range);
      read(w, "straight_bias", c.world.straight_bias);
    }
    if (doc.contains("sweep")) {
      const json& s = doc.at("sweep");
      check_keys(s, "sweep", {"parameter", "values"});
      if (s.contains("parameter"))
        c.sweep.parameter =
            parse_sweep_parameter(s.at("parameter").get<std::string>());
      read(s, "values", c.sweep.values);
    }
    if (doc.contains("memory")) {
      const json& m = doc.at("memory");
      check_keys(m, "memory", {"max_length", "path_budget", "bytes_per_record"});
      if (m.contains("max_length") && !m.at("max_length").is_null())
        c.memory.max_length = m.at("max_length").get<int>();
      read(m, "path_budget", c.memory.path_budget);
      read(m, "bytes_per_record", c.memory.bytes_per_record);
    }
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kConfig, std::string("config: ") + e.what());
  }
  c.env.reward.max_loss = c.env.max_loss;
  c.env.reward.mu_threshold = c.env.mu_threshold;
  propagate_seed(c);
  return c;
}

ExperimentConfig load_experiment_config(const std::filesystem::path& path) {
  if (!std::filesystem::exists(path)) {
    throw Error(ErrorCode::kMissingInput, "config file not found: " + path.string());
  }
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIo, "cannot open " + path.string());
  return parse_experiment_config(in, std::filesystem::absolute(path).parent_path());
}

void propagate_seed(ExperimentConfig& config) {
  config.env.rng_seed = config.seed;
  config.train.rng_seed = config.seed;
  config.world.seed = config.seed;
}

void validate(const ExperimentConfig& c) {
  validate(c.env);
  validate(c.train);
  if (!(c.split_fraction > 0.0 && c.split_fraction < 1.0)) {
    throw Error(ErrorCode::kConfig, "split_fraction must lie in (0,1)");
  }
  if (c.mode == Mode::kGenerate) validate(c.world);
  if (c.mode == Mode::kSweep && c.sweep.values.empty()) {
    throw Error(ErrorCode::kConfig, "sweep needs at least one value");
  }
  const bool reads_network = c.mode != Mode::kGenerate;
  const bool reads_trajectories =
      c.mode == Mode::kTrain || c.mode == Mode::kEvaluate ||
      c.mode == Mode::kSweep;
  auto require = [](const std::filesystem::path& p, const char* what) {
    if (p.empty()) {
      throw Error(ErrorCode::kMissingInput, std::string(what) + " not configured");
    }
    if (!std::filesystem::exists(p)) {
      throw Error(ErrorCode::kMissingInput,
                  std::string(what) + " not found: " + p.string());
    }
  };
  if (reads_network) require(c.paths.network_file, "network_file");
  if (reads_trajectories) require(c.paths.trajectory_file, "trajectory_file");
}

std::string to_json(const EnvConfig& config) { return env_json(config).dump(); }

std::string to_json(const ExperimentConfig& c) {
  json doc{
      {"mode", to_string(c.mode)},
      {"seed", c.seed},
      {"label", c.label},
      {"split_fraction", c.split_fraction},
      {"paths",
       {{"network_file", c.paths.network_file.string()},
        {"trajectory_file", c.paths.trajectory_file.string()},
        {"output_dir", c.paths.output_dir.string()},
        {"dictionary_file", c.paths.dictionary_file.string()}}},
      {"env", env_json(c.env)},
      {"train",
       {{"iterations", c.train.iterations},
        {"episodes_per_iteration", c.train.episodes_per_iteration},
        {"batch_size", c.train.batch_size},
        {"gamma", c.train.gamma},
        {"learning_rate", c.train.learning_rate},
        {"epsilon",
         {{"start", c.train.epsilon.start},
          {"end", c.train.epsilon.end},
          {"decay_fraction", c.train.epsilon.decay_fraction}}},
        {"target_sync_interval", c.train.target_sync_interval},
        {"replay_capacity", c.train.replay_capacity},
        {"hidden_layers", c.train.hidden_layers},
        {"dropout", c.train.dropout},
        {"policy", c.train.policy == Policy::kDqn ? "dqn" : "random"}}},
      {"world",
       {{"grid_width", c.world.grid_width},
        {"grid_height", c.world.grid_height},
        {"n_trajectories", c.world.n_trajectories},
        {"walk_length_range", c.world.walk_length_range},
        {"straight_bias", c.world.straight_bias}}},
      {"sweep",
       {{"parameter", to_string(c.sweep.parameter)}, {"values", c.sweep.values}}},
      {"memory",
       {{"max_length", c.memory.max_length ? json(*c.memory.max_length) : json()},
        {"path_budget", c.memory.path_budget},
        {"bytes_per_record", c.memory.bytes_per_record}}}};
  // Laid out like the input file so the resolved config can be fed back in;
  // section seeds are derived from the top-level one.
  doc["scalarizer"] = doc["env"]["scalarizer"];
  doc["env"].erase("scalarizer");
  doc["env"].erase("rng_seed");
  return doc.dump(2);
}

}  // namespace pathlet
