#pragma once

#include <filesystem>
#include <optional>
#include <ostream>

#include "pathlet/config.hpp"

namespace pathlet::app {

struct RunOptions {
  // Test hook: replay this script instead of training.
  std::optional<std::filesystem::path> force_actions;
};

// Executes one experiment and writes its artifacts under the configured
// output directory. Human-readable results go to `out`. Throws pathlet::Error.
void run(const ExperimentConfig& config, const RunOptions& options,
         std::ostream& out);

// run() with errors reported on `err`; returns the process exit status.
int run_guarded(const ExperimentConfig& config, const RunOptions& options,
                std::ostream& out, std::ostream& err);

}  // namespace pathlet::app
