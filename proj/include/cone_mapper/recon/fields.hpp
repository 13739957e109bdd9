#pragma once

#include <cstdint>
#include <map>
#include <vector>

#include "cone_mapper/core/measurement.hpp"
#include "cone_mapper/physics/attenuation.hpp"

namespace cone_mapper::recon {

/// Per-cell emission-intensity estimate.
struct LambdaField {
  std::vector<double> values;
  int iteration = 0;
};

/// Accumulated detection sensitivity s_j plus, per agent, the timestamp of
/// the last viewpoint folded in. Entries only ever grow.
struct SensitivityField {
  std::vector<double> values;
  std::map<AgentId, double> last_timestamp;

  SensitivityField() = default;
  explicit SensitivityField(std::size_t cells) : values(cells, 0.0) {}
};

/// Sparse system-matrix row of one cone: t_ij for the retained cells j.
struct SystemRow {
  std::vector<std::uint32_t> cells;
  std::vector<double> weights;

  bool empty() const { return cells.empty(); }
  std::size_t size() const { return cells.size(); }
};

struct ProjectionParams {
  double sigma = 0.17;                   // cone-width uncertainty, rad
  physics::AttenuationModel attenuation;  // air attenuation
  double eps_t = 1e-3;                   // retained if t_ij >= eps_t * row max
  double band = 3.0;                     // cells with delta > band*sigma dropped; 0 = off

  void validate() const;
};

}  // namespace cone_mapper::recon
