#include "cone_mapper/strategy/zigzag.hpp"

#include <cmath>

#include "cone_mapper/core/error.hpp"

namespace cone_mapper::strategy {

std::vector<std::vector<Position3>> zigzag(const SearchArea& area, double lateral_step,
                                           std::size_t n_agents) {
  if (!(lateral_step > 0.0) || !std::isfinite(lateral_step)) {
    throw ConfigError("zigzag: lateral step must be > 0");
  }
  if (n_agents == 0) throw ConfigError("zigzag: at least one agent required");
  if (!(area.extent_x > 0.0 && area.extent_y > 0.0)) {
    throw ConfigError("zigzag: area extents must be > 0");
  }
  const double w = area.extent_x / static_cast<double>(n_agents);
  const double y0 = area.origin.y;
  const double y1 = area.origin.y + area.extent_y;
  std::vector<std::vector<Position3>> out(n_agents);
  for (std::size_t a = 0; a < n_agents; ++a) {
    const double x0 = area.origin.x + static_cast<double>(a) * w;
    std::vector<double> xs;
    if (lateral_step > w) {
      xs.push_back(x0 + 0.5 * w);
    } else {
      // Small tolerance so that step == w still yields both edges.
      const auto n_lines = static_cast<std::size_t>(std::floor(w / lateral_step + 1e-9)) + 1;
      for (std::size_t k = 0; k < n_lines; ++k) {
        xs.push_back(std::min(x0 + static_cast<double>(k) * lateral_step, x0 + w));
      }
    }
    auto& pts = out[a];
    for (std::size_t k = 0; k < xs.size(); ++k) {
      const bool up = (k % 2 == 0);
      pts.push_back({xs[k], up ? y0 : y1, area.origin.z});
      pts.push_back({xs[k], up ? y1 : y0, area.origin.z});
    }
  }
  return out;
}

double polyline_length(const std::vector<Position3>& pts) {
  double len = 0.0;
  for (std::size_t i = 1; i < pts.size(); ++i) {
    len += std::hypot(pts[i].x - pts[i - 1].x, pts[i].y - pts[i - 1].y);
  }
  return len;
}

}  // namespace cone_mapper::strategy
