#pragma once

#include <span>

#include "cone_mapper/core/grid.hpp"
#include "cone_mapper/core/measurement.hpp"
#include "cone_mapper/physics/attenuation.hpp"
#include "cone_mapper/physics/lookup_table.hpp"
#include "cone_mapper/recon/fields.hpp"

namespace cone_mapper::recon {

/// Folds a batch of viewpoints into the sensitivity field:
///   s_j += sum_v exp(-mu |m_j - v|) L(phi_jv, theta_jv) / |m_j - v|^2 * dt_v
/// where dt_v is the gap to the same agent's previous viewpoint (or
/// `first_dt` for an agent's first viewpoint). Terms are added one viewpoint
/// at a time in batch order, so any split of a stream into batches gives a
/// bitwise identical field.
///
/// Throws OrderingError, without modifying the field, if an agent's
/// timestamps are not strictly increasing.
void sensitivity_update(SensitivityField& field, std::span<const Viewpoint> viewpoints,
                        const GridMap& grid, const physics::AttenuationModel& attenuation,
                        const physics::LookupTable& table, double first_dt);

// Single-threaded reference; same result bit for bit.
void sensitivity_update_serial(SensitivityField& field, std::span<const Viewpoint> viewpoints,
                               const GridMap& grid,
                               const physics::AttenuationModel& attenuation,
                               const physics::LookupTable& table, double first_dt);

}  // namespace cone_mapper::recon
