#pragma once

#include <span>
#include <vector>

#include "cone_mapper/core/geometry.hpp"

namespace cone_mapper::strategy {

inline constexpr std::size_t kMaxSequenceLength = 50;

/// Length of the open path start -> points[order[0]] -> points[order[1]] ...
/// (planar Euclidean).
double path_cost(const Position3& start, std::span<const Position3> points,
                 std::span<const std::size_t> order);

/// Greedy nearest-neighbour tour from `start`; ties go to the lower index.
std::vector<std::size_t> nearest_neighbor_order(std::span<const Position3> points,
                                                const Position3& start);

/// 2-opt on an open path with a fixed start, iterated to local optimality.
void two_opt(std::span<const Position3> points, const Position3& start,
             std::vector<std::size_t>& order);

/// Moves segments of up to three consecutive stops (either orientation) to
/// any other position while that shortens the path. Returns true if any move
/// was applied.
bool or_opt(std::span<const Position3> points, const Position3& start,
            std::vector<std::size_t>& order);

/// Visiting order (indices into `points`) for an open path that starts at
/// `start` and may end anywhere: nearest neighbour from every possible first
/// stop, then 2-opt and or-opt alternated until neither improves, then a
/// fixed-seed series of double-bridge kicks that keep only improvements.
/// Deterministic. Throws ConfigError above kMaxSequenceLength.
std::vector<std::size_t> sequence(std::span<const Position3> points, const Position3& start);

}  // namespace cone_mapper::strategy
