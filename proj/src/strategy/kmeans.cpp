#include "cone_mapper/strategy/kmeans.hpp"

#include <algorithm>
#include <limits>
#include <random>

#include "cone_mapper/core/error.hpp"
#include "cone_mapper/core/rng.hpp"

namespace cone_mapper::strategy {

namespace {

std::size_t nearest(const Position3& p, std::span<const Position3> centroids) {
  std::size_t best = 0;
  double best_d = std::numeric_limits<double>::infinity();
  for (std::size_t c = 0; c < centroids.size(); ++c) {
    const double d = planar_distance2(p, centroids[c]);
    if (d < best_d) {
      best_d = d;
      best = c;
    }
  }
  return best;
}

}  // namespace

Clustering lloyd(std::span<const Position3> points, std::vector<Position3> centroids,
                 int max_iter) {
  Clustering out;
  out.centroids = std::move(centroids);
  const std::size_t k = out.centroids.size();
  out.assignment.assign(points.size(), k);  // k = unassigned sentinel
  if (k == 0) return out;
  std::vector<Vec3> sums(k);
  std::vector<std::size_t> counts(k);
  for (int it = 0; it < max_iter; ++it) {
    bool changed = false;
    for (std::size_t i = 0; i < points.size(); ++i) {
      const std::size_t c = nearest(points[i], out.centroids);
      if (c != out.assignment[i]) {
        out.assignment[i] = c;
        changed = true;
      }
    }
    out.iterations = it + 1;
    if (!changed) break;
    std::fill(sums.begin(), sums.end(), Vec3{});
    std::fill(counts.begin(), counts.end(), 0);
    for (std::size_t i = 0; i < points.size(); ++i) {
      sums[out.assignment[i]] += points[i];
      ++counts[out.assignment[i]];
    }
    for (std::size_t c = 0; c < k; ++c) {
      if (counts[c] > 0) out.centroids[c] = sums[c] * (1.0 / static_cast<double>(counts[c]));
    }
  }
  return out;
}

Clustering kmeans(std::span<const Position3> points, std::size_t k, std::uint64_t seed) {
  if (points.empty()) throw ConfigError("kmeans: no points");
  if (k == 0) throw ConfigError("kmeans: k must be >= 1");
  k = std::min(k, points.size());

  // k-means++ seeding.
  Rng rng(derive_seed({seed, 0x6b6d65616e73ULL}));
  std::vector<Position3> centroids;
  centroids.reserve(k);
  std::uniform_int_distribution<std::size_t> first(0, points.size() - 1);
  centroids.push_back(points[first(rng)]);
  std::vector<double> d2(points.size(), std::numeric_limits<double>::infinity());
  while (centroids.size() < k) {
    double total = 0.0;
    for (std::size_t i = 0; i < points.size(); ++i) {
      d2[i] = std::min(d2[i], planar_distance2(points[i], centroids.back()));
      total += d2[i];
    }
    if (!(total > 0.0)) break;  // fewer distinct points than k
    std::uniform_real_distribution<double> pick(0.0, total);
    double target = pick(rng);
    std::size_t chosen = points.size() - 1;
    for (std::size_t i = 0; i < points.size(); ++i) {
      target -= d2[i];
      if (target <= 0.0 && d2[i] > 0.0) {
        chosen = i;
        break;
      }
    }
    centroids.push_back(points[chosen]);
  }

  return lloyd(points, std::move(centroids));
}

std::vector<Position3> cluster_exploration(std::span<const Position3> points, std::size_t k,
                                           std::uint64_t seed) {
  if (points.empty()) throw ConfigError("cluster_exploration: no points");
  if (k == 0) throw ConfigError("cluster_exploration: k must be >= 1");
  if (k >= points.size()) return {points.begin(), points.end()};

  const Clustering cl = kmeans(points, k, seed);
  std::vector<Position3> snapped;
  snapped.reserve(cl.centroids.size());
  for (std::size_t c = 0; c < cl.centroids.size(); ++c) {
    std::size_t best = points.size();
    double best_d = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < points.size(); ++i) {
      if (cl.assignment[i] != c) continue;
      const double d = planar_distance2(points[i], cl.centroids[c]);
      if (d < best_d) {
        best_d = d;
        best = i;
      }
    }
    if (best < points.size()) snapped.push_back(points[best]);
  }
  return snapped;
}

std::vector<std::vector<std::size_t>> assign_to_agents(std::span<const Position3> waypoints,
                                                       std::span<const Position3> agents) {
  if (agents.empty()) throw ConfigError("assign_to_agents: no agents");
  std::vector<std::vector<std::size_t>> out(agents.size());
  if (waypoints.empty()) return out;
  const Clustering cl = lloyd(waypoints, {agents.begin(), agents.end()});
  for (std::size_t i = 0; i < waypoints.size(); ++i) out[cl.assignment[i]].push_back(i);
  return out;
}

double within_cluster_ss(std::span<const Position3> points,
                         std::span<const Position3> centroids,
                         std::span<const std::size_t> assignment) {
  double ss = 0.0;
  for (std::size_t i = 0; i < points.size(); ++i) {
    ss += planar_distance2(points[i], centroids[assignment[i]]);
  }
  return ss;
}

}  // namespace cone_mapper::strategy
