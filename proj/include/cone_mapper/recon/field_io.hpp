#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "cone_mapper/core/grid.hpp"

namespace cone_mapper::recon {

struct FieldDump {
  std::size_t nx = 0;
  std::size_t ny = 0;
  double resolution = 0.0;
  double origin_x = 0.0;
  double origin_y = 0.0;
  std::vector<double> values;
};

// "grid nx ny r ox oy" followed by the J values, one per line, row-major.
void write_field(std::ostream& os, const GridMap& grid, const std::vector<double>& values);
void write_field(const std::string& path, const GridMap& grid,
                 const std::vector<double>& values);

FieldDump read_field(std::istream& is);
FieldDump read_field(const std::string& path);

}  // namespace cone_mapper::recon
