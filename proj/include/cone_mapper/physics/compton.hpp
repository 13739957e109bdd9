#pragma once

namespace cone_mapper::physics {

// m_e c^2 in keV.
inline constexpr double kElectronRestEnergyKeV = 511.0;

struct ComptonAngle {
  double beta = 0.0;       // scattering angle, radians
  double cos_beta = 1.0;   // B = 1 + m_e c^2 (1/(E1 + E0) - 1/E0)
};

/// Scattering angle from the incident photon energy `e0_kev` and the
/// energy `e1_kev` deposited by the recoil electron.
/// Throws ConfigError for non-positive energies and KinematicsError when B
/// falls outside [-1, 1].
ComptonAngle compton_angle(double e0_kev, double e1_kev);

}  // namespace cone_mapper::physics
