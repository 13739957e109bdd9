#pragma once

#include <cstddef>
#include <vector>

#include "cone_mapper/core/geometry.hpp"
#include "cone_mapper/core/measurement.hpp"

namespace cone_mapper::sim {

/// Kinematic stand-in for one aerial agent carrying a level-mounted sensor.
/// The path holds 3D waypoints already lifted to flight altitude.
struct AgentState {
  AgentId id = 0;
  SensorPose pose;
  double max_speed = 8.0;      // m/s
  double speed = 8.0;          // commanded, clamped to max_speed
  double flight_height = 2.0;  // m above terrain
  std::vector<Position3> path;
  std::size_t next = 0;  // index of the next waypoint to reach

  void validate() const;
  bool idle() const { return next >= path.size(); }
  void set_path(std::vector<Position3> waypoints) {
    path = std::move(waypoints);
    next = 0;
  }
};

/// Moves the agent along its remaining waypoints by min(speed, max_speed) * dt,
/// carrying leftover distance over reached waypoints. Yaw follows the last
/// direction of horizontal motion; an idle agent hovers.
/// Throws ConfigError for dt <= 0.
AgentState advance_agent(AgentState agent, double dt);

}  // namespace cone_mapper::sim
