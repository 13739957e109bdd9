#include "cone_mapper/physics/compton.hpp"

#include <cmath>
#include <string>

#include "cone_mapper/core/error.hpp"

namespace cone_mapper::physics {

ComptonAngle compton_angle(double e0_kev, double e1_kev) {
  if (!(e0_kev > 0.0) || !(e1_kev > 0.0) || !std::isfinite(e0_kev) || !std::isfinite(e1_kev)) {
    throw ConfigError("compton_angle: energies must be finite and > 0");
  }
  // 1 - B = m c^2 * E1 / (E0 (E0 + E1)); evaluated directly to avoid cancellation.
  const double one_minus_b = kElectronRestEnergyKeV * e1_kev / (e0_kev * (e0_kev + e1_kev));
  const double one_plus_b = 2.0 - one_minus_b;
  if (one_plus_b < 0.0) {
    throw KinematicsError("energies E0=" + std::to_string(e0_kev) +
                          " keV, E1=" + std::to_string(e1_kev) +
                          " keV are inconsistent with Compton scattering");
  }
  ComptonAngle out;
  out.cos_beta = 1.0 - one_minus_b;
  // Half-angle form is well conditioned at both ends of [0, pi].
  out.beta = 2.0 * std::atan2(std::sqrt(0.5 * one_minus_b), std::sqrt(0.5 * one_plus_b));
  return out;
}

}  // namespace cone_mapper::physics
