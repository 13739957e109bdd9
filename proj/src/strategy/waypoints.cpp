#include "cone_mapper/strategy/waypoints.hpp"

#include <algorithm>

#include "cone_mapper/core/error.hpp"
#include "cone_mapper/recon/maxima.hpp"
#include "cone_mapper/strategy/kmeans.hpp"
#include "cone_mapper/strategy/planner.hpp"

namespace cone_mapper::strategy {

const char* to_string(WaypointKind kind) {
  return kind == WaypointKind::exploitation ? "exploitation" : "exploration";
}

std::size_t WaypointSet::count(WaypointKind kind) const {
  return static_cast<std::size_t>(std::count_if(waypoints.begin(), waypoints.end(),
                                                [&](const Waypoint& w) { return w.kind == kind; }));
}

std::vector<Position3> WaypointSet::positions() const {
  std::vector<Position3> out;
  out.reserve(waypoints.size());
  for (const auto& w : waypoints) out.push_back(w.position);
  return out;
}

WaypointSet generate_waypoints(const recon::LambdaField& lambda,
                               const recon::SensitivityField& sensitivity, const GridMap& grid,
                               const StrategyConfig& config, std::span<const VisitRecord> recent,
                               double now, std::uint64_t seed) {
  config.validate();
  if (lambda.values.size() != grid.size() || sensitivity.values.size() != grid.size()) {
    throw ConfigError("generate_waypoints: field size does not match the grid");
  }
  std::vector<Waypoint> all;

  const auto maxima =
      recon::local_maxima(lambda, grid, recon::kAllMaxima, &sensitivity, config.s_max);
  for (const auto& p : maxima.peaks) {
    if (config.max_exploitation > 0 && all.size() >= config.max_exploitation) break;
    all.push_back({p.cell, grid.center(p.cell), WaypointKind::exploitation});
  }

  std::vector<Position3> sparse;
  for (CellIndex j = 0; j < grid.size(); ++j) {
    if (sensitivity.values[j] < config.s_min) sparse.push_back(grid.center(j));
  }
  if (!sparse.empty()) {
    for (const auto& c : cluster_exploration(sparse, config.k_explore, seed)) {
      const CellIndex cell = grid.nearest_cell(c);
      const bool near_existing = std::any_of(all.begin(), all.end(), [&](const Waypoint& w) {
        return cell_distance(grid, w.cell, cell) <= 1;
      });
      if (!near_existing) all.push_back({cell, grid.center(cell), WaypointKind::exploration});
    }
  }

  WaypointSet out;
  const double r2 = config.recent_radius * config.recent_radius;
  for (const auto& w : all) {
    const bool visited = std::any_of(recent.begin(), recent.end(), [&](const VisitRecord& v) {
      return now - v.t <= config.recent_window && planar_distance2(v.position, w.position) <= r2;
    });
    if (visited) {
      ++out.n_filtered;
    } else {
      out.waypoints.push_back(w);
    }
  }
  return out;
}

}  // namespace cone_mapper::strategy
