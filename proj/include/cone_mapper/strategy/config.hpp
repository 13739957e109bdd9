#pragma once

#include <cstddef>

#include "cone_mapper/physics/attenuation.hpp"
#include "cone_mapper/physics/lookup_table.hpp"

namespace cone_mapper::strategy {

struct StrategyConfig {
  double s_min = 0.0;  // exploration threshold, sensitivity units
  double s_max = 0.0;  // exploitation gate
  std::size_t k_explore = 12;
  double recent_radius = 3.0;   // m
  double recent_window = 30.0;  // s
  double replan_period = 10.0;  // s
  // Keep at most this many exploitation waypoints (strongest first); 0 = all.
  std::size_t max_exploitation = 0;

  void validate() const;
};

/// Sensitivity a cell collects from a single straight, level pass of one
/// agent: the agent flies at `height` above the cell's ground level, offset
/// `lateral` metres sideways, over `pass_length` metres centred on the cell,
/// sampled every `dt` seconds at `speed`.
double single_pass_sensitivity(const physics::LookupTable& table,
                               const physics::AttenuationModel& attenuation, double height,
                               double lateral, double speed, double dt, double pass_length);

}  // namespace cone_mapper::strategy
