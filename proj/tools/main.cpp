#include <cstdlib>
#include <iostream>
#include <string>

#include <CLI11.hpp>
#include <spdlog/cfg/helpers.h>
#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include "app.hpp"
#include "pathlet/error.hpp"

namespace {

void configure_logging() {
  auto logger = spdlog::stderr_color_mt("pathlet");
  spdlog::set_default_logger(logger);
  spdlog::set_level(spdlog::level::info);
  if (const char* level = std::getenv("PATHLET_LOG")) {
    spdlog::cfg::helpers::load_levels(level);
  }
}

}  // namespace

int main(int argc, char** argv) {
  configure_logging();

  CLI::App cli{"Pathlet dictionary construction by reinforcement-learned merging"};
  std::string config_path;
  std::string mode;
  std::optional<std::uint64_t> seed;
  std::string out_dir;
  std::string force_actions;
  cli.add_option("--config", config_path, "Experiment configuration (JSON)")
      ->required();
  cli.add_option("--mode", mode, "Override the configured mode")
      ->check(CLI::IsMember({"train", "evaluate", "sweep", "memory", "generate"}));
  cli.add_option("--seed", seed, "Override the experiment seed");
  cli.add_option("--out", out_dir, "Override the output directory");
  cli.add_option("--force-actions", force_actions,
                 "Replay a scripted action file instead of training (testing)")
      ->group("Testing");
  try {
    cli.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int status = cli.exit(e);
    return status == 0 ? 0 : static_cast<int>(pathlet::ErrorCode::kUsage);
  }

  pathlet::ExperimentConfig config;
  try {
    config = pathlet::load_experiment_config(config_path);
    if (!mode.empty()) config.mode = pathlet::parse_mode(mode);
    if (seed) {
      config.seed = *seed;
      pathlet::propagate_seed(config);
    }
    if (!out_dir.empty()) config.paths.output_dir = out_dir;
  } catch (const pathlet::Error& e) {
    std::cerr << "error[" << pathlet::to_string(e.code()) << "]: " << e.what()
              << '\n';
    return static_cast<int>(e.code());
  }

  pathlet::app::RunOptions options;
  if (!force_actions.empty()) options.force_actions = force_actions;
  return pathlet::app::run_guarded(config, options, std::cout, std::cerr);
}
