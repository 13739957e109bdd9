#pragma once

#include <vector>

#include "cone_mapper/core/measurement.hpp"
#include "cone_mapper/core/rng.hpp"

namespace cone_mapper::sim {

struct NoiseSpec {
  double sigma = 0.17;            // N(0, sigma) added to the reported opening angle, rad
  double p_ambiguous = 0.13;      // chance of a second, spurious cone per event
  double background_rate = 0.25;  // uniformly random cones per second per agent
  double beta_min = 0.17;         // rad
  double beta_max = 1.40;         // rad

  void validate() const;
};

/// Cones produced by one detected photon from `source`. The primary cone has
/// the true source direction exactly on its noiseless surface: its axis is the
/// source direction tilted by beta ~ U[beta_min, beta_max] towards a uniform
/// azimuth. The reported angle then gets Gaussian noise (redrawn until it
/// stays inside (0, pi)). With probability p_ambiguous a second cone with an
/// independent uniform axis and the same reported angle follows.
/// Throws GeometryError when the source coincides with the sensor.
std::vector<ComptonCone> synthesize_cone(const Position3& source, const SensorPose& pose,
                                         const NoiseSpec& noise, Rng& rng, double timestamp,
                                         AgentId agent);

/// A background cone: axis uniform on the sphere, beta ~ U[beta_min, beta_max].
ComptonCone background_cone(const SensorPose& pose, const NoiseSpec& noise, Rng& rng,
                            double timestamp, AgentId agent);

Vec3 uniform_unit_vector(Rng& rng);

}  // namespace cone_mapper::sim
