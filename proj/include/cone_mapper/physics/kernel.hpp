#pragma once

#include <cmath>
#include <numbers>

#include "cone_mapper/core/geometry.hpp"
#include "cone_mapper/physics/attenuation.hpp"
#include "cone_mapper/physics/lookup_table.hpp"

namespace cone_mapper::physics {

// Points closer than this to the sensor get zero weight.
inline constexpr double kMinKernelDistance = 1e-6;

/// exp(-mu d) L(phi, theta) / d^2 for a point `target` seen from `pose`.
/// This is the single detection kernel shared by the sensitivity model, the
/// system matrix and the event simulator.
inline double detection_kernel(const SensorPose& pose, const Position3& target,
                               const LookupTable& table, const AttenuationModel& att) {
  const Vec3 v = target - pose.position();
  const double d2 = dot(v, v);
  const double d = std::sqrt(d2);
  if (!(d >= kMinKernelDistance)) return 0.0;
  const PolarAngles a = polar_of_body_direction(pose.rotation().apply_inverse(v), d);
  return std::exp(-att.mu * d) * table.lookup(a) / d2;
}

/// Expected detected events per second from an isotropic emitter of
/// `activity_bq`: the fraction of quanta crossing the reference face at 1 m,
/// A_ref / (4 pi), scaled by the kernel.
inline double detection_rate(double activity_bq, double kernel, double reference_area) {
  return activity_bq * reference_area / (4.0 * std::numbers::pi) * kernel;
}

}  // namespace cone_mapper::physics
