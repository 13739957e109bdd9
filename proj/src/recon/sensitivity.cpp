#include "cone_mapper/recon/sensitivity.hpp"

#include <string>
#include <vector>

#include "cone_mapper/core/error.hpp"
#include "cone_mapper/physics/kernel.hpp"

namespace cone_mapper::recon {

namespace {

// Time weight of each viewpoint; validates ordering before anything is touched.
std::vector<double> time_weights(const SensitivityField& field,
                                 std::span<const Viewpoint> viewpoints, double first_dt) {
  if (!(first_dt > 0.0)) throw ConfigError("first viewpoint dt must be > 0");
  std::map<AgentId, double> last = field.last_timestamp;
  std::vector<double> weights;
  weights.reserve(viewpoints.size());
  for (const auto& vp : viewpoints) {
    auto it = last.find(vp.agent_id);
    if (it == last.end()) {
      weights.push_back(first_dt);
      last.emplace(vp.agent_id, vp.timestamp);
      continue;
    }
    if (!(vp.timestamp > it->second)) {
      throw OrderingError("viewpoint of agent " + std::to_string(vp.agent_id) + " at t=" +
                          std::to_string(vp.timestamp) + " does not follow t=" +
                          std::to_string(it->second));
    }
    weights.push_back(vp.timestamp - it->second);
    it->second = vp.timestamp;
  }
  return weights;
}

void commit_timestamps(SensitivityField& field, std::span<const Viewpoint> viewpoints) {
  for (const auto& vp : viewpoints) field.last_timestamp[vp.agent_id] = vp.timestamp;
}

void check_size(const SensitivityField& field, const GridMap& grid) {
  if (field.values.size() != grid.size()) {
    throw ConfigError("sensitivity field size does not match grid");
  }
}

}  // namespace

void sensitivity_update(SensitivityField& field, std::span<const Viewpoint> viewpoints,
                        const GridMap& grid, const physics::AttenuationModel& attenuation,
                        const physics::LookupTable& table, double first_dt) {
  check_size(field, grid);
  if (viewpoints.empty()) return;
  const std::vector<double> dt = time_weights(field, viewpoints, first_dt);
  const long n = static_cast<long>(grid.size());
  const std::size_t nv = viewpoints.size();
  double* s = field.values.data();
#pragma omp parallel for schedule(static)
  for (long jj = 0; jj < n; ++jj) {
    const auto j = static_cast<std::size_t>(jj);
    const Position3& m = grid.center(j);
    double acc = s[j];
    for (std::size_t v = 0; v < nv; ++v) {
      acc += physics::detection_kernel(viewpoints[v].pose, m, table, attenuation) * dt[v];
    }
    s[j] = acc;
  }
  commit_timestamps(field, viewpoints);
}

void sensitivity_update_serial(SensitivityField& field, std::span<const Viewpoint> viewpoints,
                               const GridMap& grid,
                               const physics::AttenuationModel& attenuation,
                               const physics::LookupTable& table, double first_dt) {
  check_size(field, grid);
  if (viewpoints.empty()) return;
  const std::vector<double> dt = time_weights(field, viewpoints, first_dt);
  for (std::size_t v = 0; v < viewpoints.size(); ++v) {
    for (std::size_t j = 0; j < grid.size(); ++j) {
      field.values[j] +=
          physics::detection_kernel(viewpoints[v].pose, grid.center(j), table, attenuation) *
          dt[v];
    }
  }
  commit_timestamps(field, viewpoints);
}

}  // namespace cone_mapper::recon
