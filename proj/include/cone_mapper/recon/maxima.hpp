#pragma once

#include <cstddef>
#include <limits>
#include <vector>

#include "cone_mapper/core/grid.hpp"
#include "cone_mapper/recon/fields.hpp"

namespace cone_mapper::recon {

struct Peak {
  CellIndex cell = 0;
  Position3 position;
  double value = 0.0;
};

struct LocalMaxima {
  std::vector<Peak> peaks;
  // Fewer than the requested number of maxima existed.
  bool incomplete = false;
};

inline constexpr std::size_t kAllMaxima = std::numeric_limits<std::size_t>::max();

/// Cells whose lambda strictly exceeds every existing 8-neighbour, sorted by
/// lambda descending (lower cell index first on ties) and truncated to `n`.
/// When `sensitivity` is given, only cells with s_j < s_max qualify.
/// Throws ConfigError for n == 0 or a size mismatch.
LocalMaxima local_maxima(const LambdaField& lambda, const GridMap& grid, std::size_t n,
                         const SensitivityField* sensitivity = nullptr,
                         double s_max = std::numeric_limits<double>::infinity());

}  // namespace cone_mapper::recon
