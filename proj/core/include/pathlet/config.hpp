#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "pathlet/dqn.hpp"
#include "pathlet/merge_env.hpp"
#include "pathlet/metrics.hpp"
#include "pathlet/synthetic.hpp"

namespace pathlet {

enum class Mode { kTrain, kEvaluate, kSweep, kMemory, kGenerate };

std::string_view to_string(Mode m);
Mode parse_mode(std::string_view text);

struct ExperimentPaths {
  std::filesystem::path network_file;
  std::filesystem::path trajectory_file;
  std::filesystem::path output_dir = "out";
  // Dictionary to evaluate; defaults to <output_dir>/dictionary.json.
  std::filesystem::path dictionary_file;
};

struct SweepSpec {
  SweepParameter parameter = SweepParameter::kK;
  std::vector<double> values;
};

struct MemorySpec {
  std::optional<int> max_length;
  std::uint64_t path_budget = 50'000'000;
  double bytes_per_record = 0.0;
};

struct ExperimentConfig {
  Mode mode = Mode::kTrain;
  std::uint64_t seed = 0;
  ExperimentPaths paths;
  EnvConfig env;
  TrainConfig train;
  double split_fraction = 0.7;
  SyntheticWorldSpec world;
  SweepSpec sweep;
  MemorySpec memory;
  // Label used for evaluate-mode output, e.g. curve_<label>.csv.
  std::string label = "dictionary";
};

// Parses the JSON experiment file. Relative paths resolve against
// `base_dir`. Missing keys keep their defaults; unknown keys are rejected.
ExperimentConfig parse_experiment_config(std::istream& in,
                                         const std::filesystem::path& base_dir);
ExperimentConfig load_experiment_config(const std::filesystem::path& path);

// Copies the top-level seed into every seeded component.
void propagate_seed(ExperimentConfig& config);

void validate(const ExperimentConfig& config);

std::string to_json(const ExperimentConfig& config);
std::string to_json(const EnvConfig& config);

}  // namespace pathlet
