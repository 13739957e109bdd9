#pragma once

#include "cone_mapper/core/geometry.hpp"

namespace cone_mapper {

using AgentId = int;

/// One Compton measurement. The admissible source directions u satisfy
/// angle(u, axis) = opening_angle, with the apex at the sensor position.
class ComptonCone {
 public:
  /// Axes within 1e-6 of unit length are renormalized; larger deviations throw.
  ComptonCone(const SensorPose& apex_pose, const Vec3& axis, double opening_angle,
              double timestamp, AgentId agent_id);

  const SensorPose& apex_pose() const { return apex_pose_; }
  const Position3& apex() const { return apex_pose_.position(); }
  const Vec3& axis() const { return axis_; }
  double opening_angle() const { return opening_angle_; }
  double timestamp() const { return timestamp_; }
  AgentId agent_id() const { return agent_id_; }

 private:
  SensorPose apex_pose_;
  Vec3 axis_;
  double opening_angle_;
  double timestamp_;
  AgentId agent_id_;
};

/// A sampled sensor pose along an agent trajectory.
struct Viewpoint {
  SensorPose pose;
  double timestamp = 0.0;
  AgentId agent_id = 0;
};

}  // namespace cone_mapper
