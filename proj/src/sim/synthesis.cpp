#include "cone_mapper/sim/synthesis.hpp"

#include <cmath>
#include <numbers>

#include "cone_mapper/core/error.hpp"

namespace cone_mapper::sim {

namespace {
constexpr double kPi = std::numbers::pi;
constexpr int kMaxNoiseRedraws = 64;
}  // namespace

void NoiseSpec::validate() const {
  if (!(sigma >= 0.0) || !std::isfinite(sigma)) throw ConfigError("noise.sigma must be >= 0");
  if (!(p_ambiguous >= 0.0 && p_ambiguous <= 1.0)) {
    throw ConfigError("noise.p_amb must lie in [0, 1]");
  }
  if (!(background_rate >= 0.0) || !std::isfinite(background_rate)) {
    throw ConfigError("noise.background_rate must be >= 0");
  }
  if (!(beta_min > 0.0 && beta_min < beta_max && beta_max < kPi)) {
    throw ConfigError("noise beta range must satisfy 0 < beta_min < beta_max < pi");
  }
}

Vec3 uniform_unit_vector(Rng& rng) {
  std::uniform_real_distribution<double> uz(-1.0, 1.0);
  std::uniform_real_distribution<double> uphi(0.0, 2.0 * kPi);
  const double z = uz(rng);
  const double phi = uphi(rng);
  const double r = std::sqrt(std::max(0.0, 1.0 - z * z));
  return {r * std::cos(phi), r * std::sin(phi), z};
}

std::vector<ComptonCone> synthesize_cone(const Position3& source, const SensorPose& pose,
                                         const NoiseSpec& noise, Rng& rng, double timestamp,
                                         AgentId agent) {
  const Vec3 u = normalized(source - pose.position());
  const Vec3 e1 = any_orthogonal(u);
  const Vec3 e2 = cross(u, e1);

  std::uniform_real_distribution<double> ubeta(noise.beta_min, noise.beta_max);
  std::uniform_real_distribution<double> upsi(0.0, 2.0 * kPi);
  const double beta = ubeta(rng);
  const double psi = upsi(rng);
  const Vec3 tilt = std::cos(psi) * e1 + std::sin(psi) * e2;
  const Vec3 axis = normalized(std::cos(beta) * u + std::sin(beta) * tilt);

  double reported = beta;
  if (noise.sigma > 0.0) {
    std::normal_distribution<double> gauss(0.0, noise.sigma);
    for (int k = 0; k < kMaxNoiseRedraws; ++k) {
      reported = beta + gauss(rng);
      if (reported > 0.0 && reported < kPi) break;
      reported = beta;
    }
  }

  std::vector<ComptonCone> out;
  out.emplace_back(pose, axis, reported, timestamp, agent);
  if (noise.p_ambiguous > 0.0) {
    std::bernoulli_distribution ambiguous(noise.p_ambiguous);
    if (ambiguous(rng)) {
      out.emplace_back(pose, uniform_unit_vector(rng), reported, timestamp, agent);
    }
  }
  return out;
}

ComptonCone background_cone(const SensorPose& pose, const NoiseSpec& noise, Rng& rng,
                            double timestamp, AgentId agent) {
  const Vec3 axis = uniform_unit_vector(rng);
  std::uniform_real_distribution<double> ubeta(noise.beta_min, noise.beta_max);
  return ComptonCone(pose, axis, ubeta(rng), timestamp, agent);
}

}  // namespace cone_mapper::sim
