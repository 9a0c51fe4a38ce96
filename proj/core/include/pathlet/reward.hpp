#pragma once

#include <array>
#include <string_view>
#include <utility>

namespace pathlet {

// Objective values in the space the scalarizers consume: dictionary size and
// mean representation count relative to their initial values, plus the raw
// trajectory-loss and mean-representability fractions.
struct MetricSnapshot {
  double size_norm = 1.0;
  double phi_norm = 1.0;
  double loss = 0.0;
  double mu_bar = 1.0;

  std::array<double, 4> as_array() const {
    return {size_norm, phi_norm, loss, mu_bar};
  }
};

using Alphas = std::array<double, 4>;

enum class ScalarizerKind { kLinear, kChebyshev, kDynamic };

std::string_view to_string(ScalarizerKind kind);
ScalarizerKind parse_scalarizer_kind(std::string_view text);

struct ScalarizerConfig {
  ScalarizerKind kind = ScalarizerKind::kLinear;
  Alphas alphas{0.25, 0.25, 0.25, 0.25};
  std::array<double, 4> ideal_point{0.0, 0.0, 0.0, 1.0};
  double max_loss = 0.25;
  double mu_threshold = 0.80;
  bool terminal_adjustment = true;
  double terminal_bonus_magnitude = 1.0;
};

// Throws Error(kConfig) if the alphas are negative or do not sum to 1, or the
// ideal point leaves [0,1].
void validate(const ScalarizerConfig& config);

double linear_reward(const MetricSnapshot& prev, const MetricSnapshot& curr,
                     const Alphas& alphas);

double chebyshev_reward(const MetricSnapshot& curr, const Alphas& alphas,
                        const std::array<double, 4>& ideal_point);

struct DynamicWeights {
  double traj = 1.0;
  double mu = 1.0;
};

DynamicWeights dynamic_weights(double loss, double mu_bar, double max_loss,
                               double mu_threshold);

double dynamic_reward(const MetricSnapshot& prev, const MetricSnapshot& curr,
                      const Alphas& alphas, double max_loss,
                      double mu_threshold);

// Threshold-gated end-of-episode bonus: proportional to the compaction
// achieved when both thresholds hold, a flat penalty otherwise.
double dynamic_terminal_adjustment(const MetricSnapshot& final_snapshot,
                                   double max_loss, double mu_threshold,
                                   double magnitude);

// Per-step reward for the configured scalarizer (terminal term excluded).
double step_reward(const ScalarizerConfig& config, const MetricSnapshot& prev,
                   const MetricSnapshot& curr);

}  // namespace pathlet
