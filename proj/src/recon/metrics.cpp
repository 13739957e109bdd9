#include "cone_mapper/recon/metrics.hpp"

#include <cmath>
#include <limits>

#include "cone_mapper/core/error.hpp"

namespace cone_mapper::recon {

LocalizationMetrics localization_metrics(std::span<const Position3> estimates,
                                         std::span<const Position3> sources,
                                         double tolerance) {
  if (sources.empty()) throw ConfigError("localization_metrics needs >= 1 source");
  LocalizationMetrics m;
  m.per_source_error.reserve(sources.size());
  double sq = 0.0;
  for (const auto& src : sources) {
    double best = std::numeric_limits<double>::infinity();
    for (const auto& est : estimates) best = std::min(best, norm(est - src));
    m.per_source_error.push_back(best);
    sq += best * best;
    if (best < tolerance) ++m.n_localized;
  }
  if (estimates.empty()) {
    m.rmse_defined = false;
    m.rmse = std::numeric_limits<double>::quiet_NaN();
  } else {
    m.rmse = std::sqrt(sq / static_cast<double>(sources.size()));
  }
  return m;
}

}  // namespace cone_mapper::recon
