#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "cone_mapper/core/geometry.hpp"

namespace cone_mapper::strategy {

// Horizontal (x, y) distance; planning ignores altitude.
inline double planar_distance2(const Position3& a, const Position3& b) {
  const double dx = a.x - b.x, dy = a.y - b.y;
  return dx * dx + dy * dy;
}

struct Clustering {
  std::vector<Position3> centroids;
  std::vector<std::size_t> assignment;  // cluster of each input point
  int iterations = 0;
};

/// Lloyd iterations from the given centroids until the assignment stops
/// changing or `max_iter` rounds pass. An emptied cluster keeps its previous
/// centroid. Ties go to the lower cluster index.
Clustering lloyd(std::span<const Position3> points, std::vector<Position3> centroids,
                 int max_iter = 100);

/// k-means++ seeding (seeded) followed by Lloyd; k is capped at |points|.
/// Throws ConfigError for empty input or k == 0.
Clustering kmeans(std::span<const Position3> points, std::size_t k, std::uint64_t seed);

/// kmeans(), then every centroid is snapped to the nearest point of its own
/// cluster so that it is a reachable member. When k >= |points| the points
/// are returned unchanged.
/// Throws ConfigError for empty input or k == 0.
std::vector<Position3> cluster_exploration(std::span<const Position3> points, std::size_t k,
                                           std::uint64_t seed);

/// Splits waypoints among agents: k-means with one centroid per agent,
/// initialised at the agent positions. Cluster c stays bound to agent c.
/// Returns, per agent, indices into `waypoints`.
std::vector<std::vector<std::size_t>> assign_to_agents(std::span<const Position3> waypoints,
                                                       std::span<const Position3> agents);

// Within-cluster sum of squared planar distances.
double within_cluster_ss(std::span<const Position3> points,
                         std::span<const Position3> centroids,
                         std::span<const std::size_t> assignment);

}  // namespace cone_mapper::strategy
