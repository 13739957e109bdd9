#include "cone_mapper/strategy/config.hpp"

#include <cmath>

#include "cone_mapper/core/error.hpp"
#include "cone_mapper/physics/kernel.hpp"

namespace cone_mapper::strategy {

void StrategyConfig::validate() const {
  if (!(s_min > 0.0) || !std::isfinite(s_min)) throw ConfigError("strategy.s_min must be > 0");
  if (!(s_max >= s_min) || !std::isfinite(s_max)) {
    throw ConfigError("strategy.s_max must be >= strategy.s_min");
  }
  if (k_explore < 1) throw ConfigError("strategy.k_explore must be >= 1");
  if (!(recent_radius >= 0.0) || !std::isfinite(recent_radius)) {
    throw ConfigError("strategy.recent_radius must be >= 0");
  }
  if (!(recent_window >= 0.0) || !std::isfinite(recent_window)) {
    throw ConfigError("strategy.recent_window must be >= 0");
  }
  if (!(replan_period > 0.0) || !std::isfinite(replan_period)) {
    throw ConfigError("strategy.replan_period must be > 0");
  }
}

double single_pass_sensitivity(const physics::LookupTable& table,
                               const physics::AttenuationModel& attenuation, double height,
                               double lateral, double speed, double dt, double pass_length) {
  if (!(speed > 0.0 && dt > 0.0 && pass_length > 0.0)) {
    throw ConfigError("single_pass_sensitivity: speed, dt and pass length must be > 0");
  }
  const double step = speed * dt;
  const auto n = static_cast<long>(std::floor(pass_length / step));
  const Position3 cell{0.0, 0.0, 0.0};
  double s = 0.0;
  for (long k = 0; k <= n; ++k) {
    const double x = -0.5 * pass_length + static_cast<double>(k) * step;
    const SensorPose pose({x, lateral, height}, 0.0, 0.0, 0.0);
    s += physics::detection_kernel(pose, cell, table, attenuation) * dt;
  }
  return s;
}

}  // namespace cone_mapper::strategy
