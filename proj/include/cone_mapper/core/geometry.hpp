#pragma once

#include <array>
#include <cmath>
#include <numbers>

namespace cone_mapper {

struct Vec3 {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;

  constexpr Vec3& operator+=(const Vec3& o) {
    x += o.x;
    y += o.y;
    z += o.z;
    return *this;
  }
  constexpr Vec3& operator-=(const Vec3& o) {
    x -= o.x;
    y -= o.y;
    z -= o.z;
    return *this;
  }
  constexpr Vec3& operator*=(double s) {
    x *= s;
    y *= s;
    z *= s;
    return *this;
  }

  friend constexpr bool operator==(const Vec3&, const Vec3&) = default;
};

using Position3 = Vec3;

constexpr Vec3 operator+(Vec3 a, const Vec3& b) { return a += b; }
constexpr Vec3 operator-(Vec3 a, const Vec3& b) { return a -= b; }
constexpr Vec3 operator*(Vec3 a, double s) { return a *= s; }
constexpr Vec3 operator*(double s, Vec3 a) { return a *= s; }
constexpr Vec3 operator-(const Vec3& a) { return {-a.x, -a.y, -a.z}; }

constexpr double dot(const Vec3& a, const Vec3& b) { return a.x * b.x + a.y * b.y + a.z * b.z; }

constexpr Vec3 cross(const Vec3& a, const Vec3& b) {
  return {a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x};
}

inline double norm(const Vec3& a) { return std::sqrt(dot(a, a)); }

inline bool is_finite(const Vec3& a) {
  return std::isfinite(a.x) && std::isfinite(a.y) && std::isfinite(a.z);
}

// Throws GeometryError for a zero vector.
Vec3 normalized(const Vec3& a);

// Angle in [0, pi] between two non-zero vectors.
double angle_between(const Vec3& a, const Vec3& b);

// Wraps into [-pi, pi].
double wrap_angle(double a);

// Some unit vector orthogonal to the unit vector u.
Vec3 any_orthogonal(const Vec3& u);

/// Row-major 3x3 rotation matrix.
class Rotation {
 public:
  Rotation() = default;

  /// Intrinsic z-y-x composition: R = Rz(yaw) * Ry(pitch) * Rx(roll).
  static Rotation from_euler(double roll, double pitch, double yaw);

  Vec3 apply(const Vec3& v) const {
    return {m_[0] * v.x + m_[1] * v.y + m_[2] * v.z, m_[3] * v.x + m_[4] * v.y + m_[5] * v.z,
            m_[6] * v.x + m_[7] * v.y + m_[8] * v.z};
  }

  // World to body frame.
  Vec3 apply_inverse(const Vec3& v) const {
    return {m_[0] * v.x + m_[3] * v.y + m_[6] * v.z, m_[1] * v.x + m_[4] * v.y + m_[7] * v.z,
            m_[2] * v.x + m_[5] * v.y + m_[8] * v.z};
  }

 private:
  std::array<double, 9> m_{1, 0, 0, 0, 1, 0, 0, 0, 1};
};

/// Oriented sensor pose. Orientation angles are intrinsic z-y-x (yaw, then
/// pitch, then roll) and are kept wrapped into [-pi, pi].
class SensorPose {
 public:
  SensorPose() = default;
  SensorPose(const Position3& position, double roll, double pitch, double yaw);

  const Position3& position() const { return position_; }
  double roll() const { return roll_; }
  double pitch() const { return pitch_; }
  double yaw() const { return yaw_; }
  const Rotation& rotation() const { return rotation_; }

  friend bool operator==(const SensorPose& a, const SensorPose& b) {
    return a.position_ == b.position_ && a.roll_ == b.roll_ && a.pitch_ == b.pitch_ &&
           a.yaw_ == b.yaw_;
  }

 private:
  Position3 position_{};
  double roll_ = 0.0;
  double pitch_ = 0.0;
  double yaw_ = 0.0;
  Rotation rotation_{};
};

/// Detector-frame polar coordinates: theta from the body +z axis in [0, pi],
/// phi the azimuth from body +x towards +y in [-pi, pi].
struct PolarAngles {
  double phi = 0.0;
  double theta = 0.0;
};

// Direction of a body-frame unit vector. No validation; hot path.
inline PolarAngles polar_of_body_direction(const Vec3& body, double length) {
  double c = body.z / length;
  c = c > 1.0 ? 1.0 : (c < -1.0 ? -1.0 : c);
  return {std::atan2(body.y, body.x), std::acos(c)};
}

// Throws GeometryError when target coincides with the sensor position.
PolarAngles polar_angles(const SensorPose& pose, const Position3& target);

}  // namespace cone_mapper
