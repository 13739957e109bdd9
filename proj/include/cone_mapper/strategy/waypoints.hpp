#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "cone_mapper/core/grid.hpp"
#include "cone_mapper/recon/fields.hpp"
#include "cone_mapper/strategy/config.hpp"

namespace cone_mapper::strategy {

enum class WaypointKind { exploitation, exploration };

const char* to_string(WaypointKind kind);

struct Waypoint {
  CellIndex cell = 0;
  Position3 position;  // cell center
  WaypointKind kind = WaypointKind::exploration;
};

struct VisitRecord {
  double t = 0.0;
  Position3 position;
};

struct WaypointSet {
  std::vector<Waypoint> waypoints;
  // Waypoints dropped because an agent was recently close to them.
  std::size_t n_filtered = 0;

  bool empty() const { return waypoints.empty(); }
  std::size_t size() const { return waypoints.size(); }
  std::size_t count(WaypointKind kind) const;
  std::vector<Position3> positions() const;
};

/// Exploitation waypoints are strict local maxima of lambda whose
/// sensitivity is still below s_max (strongest first, optionally capped).
/// Exploration waypoints are k-means representatives of the cells whose
/// sensitivity is below s_min; any within one cell of an exploitation
/// waypoint or of an earlier exploration waypoint is dropped. Finally every
/// waypoint within `recent_radius` of a position visited in the last
/// `recent_window` seconds (relative to `now`) is removed.
WaypointSet generate_waypoints(const recon::LambdaField& lambda,
                               const recon::SensitivityField& sensitivity, const GridMap& grid,
                               const StrategyConfig& config,
                               std::span<const VisitRecord> recent = {}, double now = 0.0,
                               std::uint64_t seed = 0);

}  // namespace cone_mapper::strategy
