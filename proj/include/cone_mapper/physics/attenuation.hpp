#pragma once

#include <cmath>

#include "cone_mapper/core/error.hpp"

namespace cone_mapper::physics {

/// Exponential photon-flux decay through air.
struct AttenuationModel {
  double mu = 0.01;  // 1/m

  void validate() const {
    if (!(mu >= 0.0) || !std::isfinite(mu)) throw ConfigError("attenuation mu must be >= 0");
  }

  double factor(double distance) const {
    if (!(distance >= 0.0)) throw GeometryError("attenuation distance must be >= 0");
    return std::exp(-mu * distance);
  }
};

}  // namespace cone_mapper::physics
