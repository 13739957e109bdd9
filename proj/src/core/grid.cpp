#include "cone_mapper/core/grid.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "cone_mapper/core/error.hpp"

namespace cone_mapper {

GridMap GridMap::from_extent(const Position3& origin, double extent_x, double extent_y,
                             double resolution, std::vector<double> heights) {
  if (!(resolution > 0.0) || !std::isfinite(resolution)) {
    throw ConfigError("grid resolution must be > 0");
  }
  if (!(extent_x > 0.0) || !(extent_y > 0.0) || !std::isfinite(extent_x) ||
      !std::isfinite(extent_y)) {
    throw ConfigError("grid extents must be > 0");
  }
  if (!is_finite(origin)) {
    throw ConfigError("grid origin must be finite");
  }
  GridMap g;
  g.origin_ = origin;
  g.resolution_ = resolution;
  // Tolerate extents that are an exact multiple up to rounding noise.
  auto cells = [resolution](double extent) {
    const double q = extent / resolution;
    const double rq = std::round(q);
    return static_cast<std::size_t>(std::abs(q - rq) < 1e-9 * std::max(1.0, q) ? rq
                                                                                : std::ceil(q));
  };
  g.nx_ = std::max<std::size_t>(1, cells(extent_x));
  g.ny_ = std::max<std::size_t>(1, cells(extent_y));
  const std::size_t n = g.nx_ * g.ny_;
  if (heights.empty()) {
    heights.assign(n, 0.0);
  } else if (heights.size() != n) {
    throw ConfigError("terrain height field has " + std::to_string(heights.size()) +
                      " entries, grid has " + std::to_string(n) + " cells");
  }
  for (double h : heights) {
    if (!std::isfinite(h)) throw ConfigError("terrain heights must be finite");
  }
  g.heights_ = std::move(heights);
  g.centers_.resize(n);
  for (std::size_t iy = 0; iy < g.ny_; ++iy) {
    for (std::size_t ix = 0; ix < g.nx_; ++ix) {
      const CellIndex j = g.index(ix, iy);
      g.centers_[j] = {origin.x + (static_cast<double>(ix) + 0.5) * resolution,
                       origin.y + (static_cast<double>(iy) + 0.5) * resolution,
                       origin.z + g.heights_[j]};
    }
  }
  return g;
}

Position3 GridMap::cell_center(CellIndex j) const {
  if (j >= size()) {
    throw std::out_of_range("cell index " + std::to_string(j) + " outside grid of " +
                            std::to_string(size()) + " cells");
  }
  return centers_[j];
}

std::optional<CellIndex> GridMap::cell_at(double x, double y) const {
  const double fx = std::floor((x - origin_.x) / resolution_);
  const double fy = std::floor((y - origin_.y) / resolution_);
  if (fx < 0.0 || fy < 0.0 || fx >= static_cast<double>(nx_) ||
      fy >= static_cast<double>(ny_)) {
    return std::nullopt;
  }
  return index(static_cast<std::size_t>(fx), static_cast<std::size_t>(fy));
}

CellIndex GridMap::nearest_cell(const Position3& p) const {
  const double fx = std::floor((p.x - origin_.x) / resolution_);
  const double fy = std::floor((p.y - origin_.y) / resolution_);
  const auto clamp_index = [](double f, std::size_t n) {
    if (!(f > 0.0)) return std::size_t{0};
    return std::min(static_cast<std::size_t>(f), n - 1);
  };
  return index(clamp_index(fx, nx_), clamp_index(fy, ny_));
}

double GridMap::terrain_height(double x, double y) const {
  const auto j = cell_at(x, y);
  return j ? heights_[*j] : 0.0;
}

}  // namespace cone_mapper
