#include "cone_mapper/core/measurement.hpp"

#include <cmath>
#include <numbers>

#include "cone_mapper/core/error.hpp"

namespace cone_mapper {

ComptonCone::ComptonCone(const SensorPose& apex_pose, const Vec3& axis, double opening_angle,
                         double timestamp, AgentId agent_id)
    : apex_pose_(apex_pose),
      axis_(axis),
      opening_angle_(opening_angle),
      timestamp_(timestamp),
      agent_id_(agent_id) {
  const double n = norm(axis);
  if (!std::isfinite(n) || std::abs(n - 1.0) > 1e-6) {
    throw GeometryError("cone axis is not a unit vector (norm " + std::to_string(n) + ")");
  }
  // Leave already-unit axes bit-identical so logged cones re-read exactly.
  if (std::abs(n - 1.0) > 1e-12) axis_ = axis * (1.0 / n);
  if (!(opening_angle > 0.0 && opening_angle < std::numbers::pi)) {
    throw GeometryError("cone opening angle must lie in (0, pi)");
  }
  if (!(timestamp >= 0.0) || !std::isfinite(timestamp)) {
    throw GeometryError("cone timestamp must be finite and >= 0");
  }
}

}  // namespace cone_mapper
