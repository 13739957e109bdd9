#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "cone_mapper/core/geometry.hpp"

namespace cone_mapper {

using CellIndex = std::size_t;

/// Flat candidate-source map: nx * ny square cells of side `resolution`,
/// enumerated row-major from the origin (x fastest). Cell indices are 0-based.
/// Each cell carries a terrain elevation; its center sits on the terrain.
class GridMap {
 public:
  /// nx = ceil(extent_x / r), ny = ceil(extent_y / r). `heights` is either
  /// empty (flat ground) or holds one elevation per cell in row-major order.
  static GridMap from_extent(const Position3& origin, double extent_x, double extent_y,
                             double resolution, std::vector<double> heights = {});

  std::size_t nx() const { return nx_; }
  std::size_t ny() const { return ny_; }
  std::size_t size() const { return nx_ * ny_; }
  double resolution() const { return resolution_; }
  const Position3& origin() const { return origin_; }
  double extent_x() const { return static_cast<double>(nx_) * resolution_; }
  double extent_y() const { return static_cast<double>(ny_) * resolution_; }
  const std::vector<double>& heights() const { return heights_; }

  CellIndex index(std::size_t ix, std::size_t iy) const { return iy * nx_ + ix; }
  std::size_t ix(CellIndex j) const { return j % nx_; }
  std::size_t iy(CellIndex j) const { return j / nx_; }

  // Throws std::out_of_range for j >= size().
  Position3 cell_center(CellIndex j) const;

  // Unchecked; for hot loops.
  const Position3& center(CellIndex j) const { return centers_[j]; }
  const std::vector<Position3>& centers() const { return centers_; }

  /// Cell containing (x, y), or nullopt outside the map.
  std::optional<CellIndex> cell_at(double x, double y) const;

  /// Nearest cell to the horizontal projection of p, clamped into the map.
  CellIndex nearest_cell(const Position3& p) const;

  /// Terrain elevation below (x, y); 0 outside the map.
  double terrain_height(double x, double y) const;

 private:
  GridMap() = default;

  Position3 origin_{};
  double resolution_ = 1.0;
  std::size_t nx_ = 0;
  std::size_t ny_ = 0;
  std::vector<double> heights_;
  std::vector<Position3> centers_;
};

}  // namespace cone_mapper
