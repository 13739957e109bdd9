#pragma once

#include <span>
#include <vector>

#include "cone_mapper/core/grid.hpp"
#include "cone_mapper/core/measurement.hpp"
#include "cone_mapper/physics/lookup_table.hpp"
#include "cone_mapper/recon/fields.hpp"

namespace cone_mapper::recon {

/// Gaussian cone-projection weight of an angular miss delta.
inline double projection_weight(double delta, double sigma) {
  const double z = delta / sigma;
  return std::exp(-0.5 * z * z);
}

/// System-matrix row of a single cone over every grid cell:
///   t_ij = exp(-mu d) h(delta_ij) L(phi_ij, theta_ij) / d^2,
/// with delta_ij the angular distance of m_j from the cone surface. Cells
/// farther than band*sigma from the surface get no weight (a cone that misses
/// the ground entirely then yields an empty row); entries below eps_t times
/// the row maximum are dropped. The row is empty only when
/// every weight is zero.
SystemRow system_row(const ComptonCone& cone, const GridMap& grid,
                     const ProjectionParams& params, const physics::LookupTable& table);

/// Rows for a batch of cones, computed in parallel over cones. Output is
/// aligned with the input and independent of the thread count.
std::vector<SystemRow> system_rows(std::span<const ComptonCone> cones, const GridMap& grid,
                                   const ProjectionParams& params,
                                   const physics::LookupTable& table);

std::vector<SystemRow> system_rows_serial(std::span<const ComptonCone> cones,
                                          const GridMap& grid, const ProjectionParams& params,
                                          const physics::LookupTable& table);

}  // namespace cone_mapper::recon
