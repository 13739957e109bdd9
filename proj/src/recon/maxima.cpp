#include "cone_mapper/recon/maxima.hpp"

#include <algorithm>

#include "cone_mapper/core/error.hpp"

namespace cone_mapper::recon {

LocalMaxima local_maxima(const LambdaField& lambda, const GridMap& grid, std::size_t n,
                         const SensitivityField* sensitivity, double s_max) {
  if (n == 0) throw ConfigError("local_maxima: n must be >= 1");
  const auto& v = lambda.values;
  if (v.size() != grid.size() || (sensitivity && sensitivity->values.size() != grid.size())) {
    throw ConfigError("local_maxima: field size does not match grid");
  }
  const long nx = static_cast<long>(grid.nx());
  const long ny = static_cast<long>(grid.ny());

  LocalMaxima out;
  for (long iy = 0; iy < ny; ++iy) {
    for (long ix = 0; ix < nx; ++ix) {
      const CellIndex j = static_cast<CellIndex>(iy * nx + ix);
      const double value = v[j];
      if (sensitivity && !(sensitivity->values[j] < s_max)) continue;
      bool strict = true;
      for (long dy = -1; dy <= 1 && strict; ++dy) {
        for (long dx = -1; dx <= 1; ++dx) {
          if (dx == 0 && dy == 0) continue;
          const long x = ix + dx, y = iy + dy;
          if (x < 0 || y < 0 || x >= nx || y >= ny) continue;
          if (!(value > v[static_cast<std::size_t>(y * nx + x)])) {
            strict = false;
            break;
          }
        }
      }
      if (strict) out.peaks.push_back({j, grid.center(j), value});
    }
  }
  std::stable_sort(out.peaks.begin(), out.peaks.end(),
                   [](const Peak& a, const Peak& b) { return a.value > b.value; });
  if (out.peaks.size() > n) {
    out.peaks.resize(n);
  } else if (n != kAllMaxima && out.peaks.size() < n) {
    out.incomplete = true;
  }
  return out;
}

}  // namespace cone_mapper::recon
