#include "cone_mapper/core/geometry.hpp"

#include <algorithm>

#include "cone_mapper/core/error.hpp"

namespace cone_mapper {

Vec3 normalized(const Vec3& a) {
  const double n = norm(a);
  if (!(n > 0.0) || !std::isfinite(n)) {
    throw GeometryError("cannot normalize a zero-length or non-finite vector");
  }
  return a * (1.0 / n);
}

double angle_between(const Vec3& a, const Vec3& b) {
  const double na = norm(a);
  const double nb = norm(b);
  if (!(na > 0.0) || !(nb > 0.0)) {
    throw GeometryError("angle_between: zero-length vector");
  }
  // atan2 form stays accurate near 0 and pi where acos loses digits.
  return std::atan2(norm(cross(a, b)), dot(a, b));
}

double wrap_angle(double a) {
  constexpr double pi = std::numbers::pi;
  if (a >= -pi && a <= pi) {
    return a;
  }
  double w = std::remainder(a, 2.0 * pi);
  if (w < -pi) w += 2.0 * pi;
  if (w > pi) w -= 2.0 * pi;
  return w;
}

Vec3 any_orthogonal(const Vec3& u) {
  // Cross with the axis least aligned to u.
  const double ax = std::abs(u.x), ay = std::abs(u.y), az = std::abs(u.z);
  Vec3 ref{1, 0, 0};
  if (ay <= ax && ay <= az) {
    ref = {0, 1, 0};
  } else if (az <= ax && az <= ay) {
    ref = {0, 0, 1};
  }
  return normalized(cross(u, ref));
}

Rotation Rotation::from_euler(double roll, double pitch, double yaw) {
  const double cr = std::cos(roll), sr = std::sin(roll);
  const double cp = std::cos(pitch), sp = std::sin(pitch);
  const double cy = std::cos(yaw), sy = std::sin(yaw);
  Rotation r;
  r.m_ = {cy * cp, cy * sp * sr - sy * cr, cy * sp * cr + sy * sr,
          sy * cp, sy * sp * sr + cy * cr, sy * sp * cr - cy * sr,
          -sp,     cp * sr,                cp * cr};
  return r;
}

SensorPose::SensorPose(const Position3& position, double roll, double pitch, double yaw)
    : position_(position),
      roll_(wrap_angle(roll)),
      pitch_(wrap_angle(pitch)),
      yaw_(wrap_angle(yaw)),
      rotation_(Rotation::from_euler(roll_, pitch_, yaw_)) {
  if (!is_finite(position) || !std::isfinite(roll) || !std::isfinite(pitch) ||
      !std::isfinite(yaw)) {
    throw GeometryError("sensor pose must be finite");
  }
}

PolarAngles polar_angles(const SensorPose& pose, const Position3& target) {
  const Vec3 world = target - pose.position();
  const double d = norm(world);
  if (!(d > 0.0)) {
    throw GeometryError("polar_angles: target coincides with sensor position");
  }
  return polar_of_body_direction(pose.rotation().apply_inverse(world), d);
}

}  // namespace cone_mapper
