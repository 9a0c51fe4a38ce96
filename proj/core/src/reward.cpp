#include "pathlet/reward.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "pathlet/error.hpp"

namespace pathlet {

std::string_view to_string(ScalarizerKind kind) {
  switch (kind) {
    case ScalarizerKind::kLinear: return "linear";
    case ScalarizerKind::kChebyshev: return "chebyshev";
    case ScalarizerKind::kDynamic: return "dynamic";
  }
  return "linear";
}

ScalarizerKind parse_scalarizer_kind(std::string_view text) {
  if (text == "linear") return ScalarizerKind::kLinear;
  if (text == "chebyshev") return ScalarizerKind::kChebyshev;
  if (text == "dynamic") return ScalarizerKind::kDynamic;
  throw Error(ErrorCode::kConfig,
              "unknown scalarizer '" + std::string(text) + "'");
}

void validate(const ScalarizerConfig& config) {
  double sum = 0.0;
  for (double a : config.alphas) {
    if (!(a >= 0.0)) throw Error(ErrorCode::kConfig, "alphas must be >= 0");
    sum += a;
  }
  if (std::abs(sum - 1.0) > 1e-9) {
    throw Error(ErrorCode::kConfig, "alphas must sum to 1");
  }
  for (double z : config.ideal_point) {
    if (!(z >= 0.0 && z <= 1.0)) {
      throw Error(ErrorCode::kConfig, "ideal point must lie in [0,1]");
    }
  }
}

double linear_reward(const MetricSnapshot& prev, const MetricSnapshot& curr,
                     const Alphas& alphas) {
  return -alphas[0] * (curr.size_norm - prev.size_norm) -
         alphas[1] * (curr.phi_norm - prev.phi_norm) -
         alphas[2] * (curr.loss - prev.loss) +
         alphas[3] * (curr.mu_bar - prev.mu_bar);
}

double chebyshev_reward(const MetricSnapshot& curr, const Alphas& alphas,
                        const std::array<double, 4>& ideal_point) {
  const auto f = curr.as_array();
  double worst = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) {
    worst = std::max(worst, alphas[i] * std::abs(f[i] - ideal_point[i]));
  }
  return -worst;
}

DynamicWeights dynamic_weights(double loss, double mu_bar, double max_loss,
                               double mu_threshold) {
  constexpr double kFloor = 0.01;
  // Width of the representability band above the threshold over which the
  // weight ramps from 1 to its clamp.
  constexpr double kMuBand = 0.2;
  DynamicWeights w;
  w.traj = 1.0 / std::max(kFloor, (max_loss - loss) / max_loss);
  w.mu = 1.0 / std::max(kFloor, (mu_bar - mu_threshold) / kMuBand);
  return w;
}

double dynamic_reward(const MetricSnapshot& prev, const MetricSnapshot& curr,
                      const Alphas& alphas, double max_loss,
                      double mu_threshold) {
  const DynamicWeights w =
      dynamic_weights(curr.loss, curr.mu_bar, max_loss, mu_threshold);
  return -alphas[0] * (curr.size_norm - prev.size_norm) -
         alphas[1] * (curr.phi_norm - prev.phi_norm) -
         alphas[2] * (curr.loss - prev.loss) * w.traj +
         alphas[3] * (curr.mu_bar - prev.mu_bar) * w.mu;
}

double dynamic_terminal_adjustment(const MetricSnapshot& final_snapshot,
                                   double max_loss, double mu_threshold,
                                   double magnitude) {
  if (final_snapshot.loss <= max_loss &&
      final_snapshot.mu_bar >= mu_threshold) {
    return magnitude * (1.0 - final_snapshot.size_norm);
  }
  return -magnitude;
}

double step_reward(const ScalarizerConfig& config, const MetricSnapshot& prev,
                   const MetricSnapshot& curr) {
  switch (config.kind) {
    case ScalarizerKind::kLinear:
      return linear_reward(prev, curr, config.alphas);
    case ScalarizerKind::kChebyshev:
      return chebyshev_reward(curr, config.alphas, config.ideal_point);
    case ScalarizerKind::kDynamic:
      return dynamic_reward(prev, curr, config.alphas, config.max_loss,
                            config.mu_threshold);
  }
  return 0.0;
}

}  // namespace pathlet
