#include "cone_mapper/recon/system_row.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "cone_mapper/core/error.hpp"
#include "cone_mapper/physics/kernel.hpp"

namespace cone_mapper::recon {

void ProjectionParams::validate() const {
  if (!(sigma > 0.0) || !std::isfinite(sigma)) throw ConfigError("recon sigma must be > 0");
  if (!(band >= 0.0)) throw ConfigError("recon band must be >= 0");
  if (!(eps_t >= 0.0) || !std::isfinite(eps_t)) throw ConfigError("recon eps_t must be >= 0");
  attenuation.validate();
}

SystemRow system_row(const ComptonCone& cone, const GridMap& grid,
                     const ProjectionParams& params, const physics::LookupTable& table) {
  const std::size_t n = grid.size();
  const Position3& apex = cone.apex();
  const Vec3& axis = cone.axis();
  const double beta = cone.opening_angle();
  const Rotation& rot = cone.apex_pose().rotation();
  const double mu = params.attenuation.mu;
  const double max_delta =
      params.band > 0.0 ? params.band * params.sigma : std::numeric_limits<double>::infinity();

  // Dense pass, then relative thresholding.
  thread_local std::vector<double> dense;
  dense.resize(n);
  double row_max = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    const Vec3 v = grid.center(j) - apex;
    const double d2 = dot(v, v);
    const double d = std::sqrt(d2);
    if (!(d >= physics::kMinKernelDistance)) {
      dense[j] = 0.0;
      continue;
    }
    const double c = std::clamp(dot(v, axis) / d, -1.0, 1.0);
    const double delta = std::abs(std::acos(c) - beta);
    const double h = delta <= max_delta ? projection_weight(delta, params.sigma) : 0.0;
    double t = 0.0;
    if (h > 0.0) {
      const PolarAngles a = polar_of_body_direction(rot.apply_inverse(v), d);
      t = std::exp(-mu * d) * h * table.lookup(a) / d2;
    }
    dense[j] = t;
    row_max = std::max(row_max, t);
  }

  SystemRow row;
  if (!(row_max > 0.0)) return row;
  const double cutoff = params.eps_t * row_max;
  for (std::size_t j = 0; j < n; ++j) {
    if (dense[j] > 0.0 && dense[j] >= cutoff) {
      row.cells.push_back(static_cast<std::uint32_t>(j));
      row.weights.push_back(dense[j]);
    }
  }
  return row;
}

std::vector<SystemRow> system_rows(std::span<const ComptonCone> cones, const GridMap& grid,
                                   const ProjectionParams& params,
                                   const physics::LookupTable& table) {
  std::vector<SystemRow> rows(cones.size());
  const long n = static_cast<long>(cones.size());
#pragma omp parallel for schedule(dynamic, 1)
  for (long i = 0; i < n; ++i) {
    rows[static_cast<std::size_t>(i)] =
        system_row(cones[static_cast<std::size_t>(i)], grid, params, table);
  }
  return rows;
}

std::vector<SystemRow> system_rows_serial(std::span<const ComptonCone> cones,
                                          const GridMap& grid, const ProjectionParams& params,
                                          const physics::LookupTable& table) {
  std::vector<SystemRow> rows;
  rows.reserve(cones.size());
  for (const auto& cone : cones) {
    rows.push_back(system_row(cone, grid, params, table));
  }
  return rows;
}

}  // namespace cone_mapper::recon
