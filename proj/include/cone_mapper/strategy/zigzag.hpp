#pragma once

#include <vector>

#include "cone_mapper/core/geometry.hpp"

namespace cone_mapper::strategy {

struct SearchArea {
  Position3 origin{};
  double extent_x = 0.0;
  double extent_y = 0.0;
};

/// Boustrophedon coverage: the area is cut into `n_agents` equal strips along
/// x, and each strip is swept by lines parallel to y spaced `lateral_step`
/// apart, starting at the strip's left edge. A step wider than the strip
/// gives one line through the strip center. Returned points are the turn
/// points of each agent's polyline (z = origin.z).
std::vector<std::vector<Position3>> zigzag(const SearchArea& area, double lateral_step,
                                           std::size_t n_agents);

/// Polyline length in the horizontal plane.
double polyline_length(const std::vector<Position3>& pts);

}  // namespace cone_mapper::strategy
