#pragma once

#include <span>
#include <vector>

#include "cone_mapper/core/geometry.hpp"

namespace cone_mapper::recon {

struct LocalizationMetrics {
  // Distance from each true source to its nearest estimate; +inf without estimates.
  std::vector<double> per_source_error;
  // Root mean square of per_source_error; NaN when undefined.
  double rmse = 0.0;
  bool rmse_defined = true;
  std::size_t n_localized = 0;
};

/// Throws ConfigError when `sources` is empty.
LocalizationMetrics localization_metrics(std::span<const Position3> estimates,
                                         std::span<const Position3> sources,
                                         double tolerance = 2.0);

}  // namespace cone_mapper::recon
