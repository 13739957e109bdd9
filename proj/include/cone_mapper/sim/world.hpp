#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "cone_mapper/core/grid.hpp"
#include "cone_mapper/core/measurement.hpp"
#include "cone_mapper/physics/attenuation.hpp"
#include "cone_mapper/physics/lookup_table.hpp"
#include "cone_mapper/sim/agent.hpp"
#include "cone_mapper/sim/synthesis.hpp"

namespace cone_mapper::sim {

struct SourceSpec {
  Position3 position;
  double activity = 2e9;  // Bq

  void validate() const;
};

// Photoelectric events per Compton event in the recorded field statistics
// (10.02 /s against 0.46 /s). Only tallied, never turned into measurements.
inline constexpr double kPhotoelectricPerCompton = 10.02 / 0.46;

struct SimParams {
  NoiseSpec noise;
  physics::AttenuationModel attenuation;
  double reference_area = 0.014 * 0.014;  // m^2, detector face
  std::uint64_t seed = 1;

  void validate() const;
};

struct StepOutput {
  std::vector<ComptonCone> cones;
  std::vector<Viewpoint> viewpoints;
  std::size_t source_events = 0;      // detected photons (before ambiguity)
  std::size_t background_cones = 0;
  std::size_t photoelectric_events = 0;
};

/// The synthetic world. Every step draws its randomness from substreams keyed
/// by (seed, step, source, agent), so output is a pure function of the
/// configuration, the seed and the dispatched paths.
class World {
 public:
  World(GridMap grid, std::vector<SourceSpec> sources, std::vector<AgentState> agents,
        physics::LookupTable table, SimParams params);

  /// Advances every agent by dt, records one viewpoint per agent at the new
  /// pose, then samples Poisson counts of source and background cones.
  StepOutput step(double dt);

  /// Expected detected-event rate of a source seen from `pose`.
  double event_rate(const SourceSpec& source, const SensorPose& pose) const;

  double clock() const { return clock_; }
  std::uint64_t step_index() const { return step_; }
  const GridMap& grid() const { return grid_; }
  const std::vector<SourceSpec>& sources() const { return sources_; }
  const std::vector<AgentState>& agents() const { return agents_; }
  const physics::LookupTable& table() const { return table_; }
  const SimParams& params() const { return params_; }

  /// Replaces an agent's path with horizontal waypoints lifted to its flight
  /// altitude over the terrain.
  void dispatch(std::size_t agent_index, const std::vector<Position3>& waypoints);

 private:
  GridMap grid_;
  std::vector<SourceSpec> sources_;
  std::vector<AgentState> agents_;
  physics::LookupTable table_;
  SimParams params_;
  double clock_ = 0.0;
  std::uint64_t step_ = 0;
};

}  // namespace cone_mapper::sim
