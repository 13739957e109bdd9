#include "cone_mapper/recon/mlem.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "cone_mapper/core/error.hpp"

namespace cone_mapper::recon {

namespace {

void check_inputs(const LambdaField& init, std::span<const SystemRow> rows,
                  const SensitivityField& s, int n_iter) {
  if (n_iter < 1) throw ConfigError("mlem needs n_iter >= 1");
  if (rows.empty()) throw ConfigError("mlem needs at least one system row");
  if (init.values.size() != s.values.size()) {
    throw ConfigError("mlem: lambda and sensitivity sizes differ");
  }
  const std::size_t n = s.values.size();
  for (const auto& row : rows) {
    if (row.cells.size() != row.weights.size()) throw ConfigError("mlem: malformed row");
    for (auto j : row.cells) {
      if (j >= n) throw ConfigError("mlem: row references a cell outside the map");
    }
  }
}

LambdaField frozen_start(const LambdaField& init, const SensitivityField& s) {
  LambdaField lambda = init;
  for (std::size_t j = 0; j < s.values.size(); ++j) {
    if (!(s.values[j] > 0.0)) lambda.values[j] = 0.0;
  }
  return lambda;
}

// Column-major copy: for each cell, (row, weight) pairs in increasing row order.
struct Transposed {
  std::vector<std::size_t> offsets;
  std::vector<std::uint32_t> rows;
  std::vector<double> weights;
};

Transposed transpose(std::span<const SystemRow> rows, std::size_t n_cells) {
  Transposed t;
  t.offsets.assign(n_cells + 1, 0);
  for (const auto& row : rows) {
    for (auto j : row.cells) ++t.offsets[j + 1];
  }
  for (std::size_t j = 0; j < n_cells; ++j) t.offsets[j + 1] += t.offsets[j];
  t.rows.resize(t.offsets[n_cells]);
  t.weights.resize(t.offsets[n_cells]);
  std::vector<std::size_t> fill(t.offsets.begin(), t.offsets.end() - 1);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto& row = rows[i];
    for (std::size_t e = 0; e < row.cells.size(); ++e) {
      const std::size_t slot = fill[row.cells[e]]++;
      t.rows[slot] = static_cast<std::uint32_t>(i);
      t.weights[slot] = row.weights[e];
    }
  }
  return t;
}

}  // namespace

LambdaField uniform_init(const SensitivityField& sensitivity) {
  LambdaField lambda;
  lambda.values.resize(sensitivity.values.size());
  for (std::size_t j = 0; j < lambda.values.size(); ++j) {
    lambda.values[j] = sensitivity.values[j] > 0.0 ? 1.0 : 0.0;
  }
  return lambda;
}

MlemResult mlem(const LambdaField& init, std::span<const SystemRow> rows,
                const SensitivityField& sensitivity, int n_iter) {
  check_inputs(init, rows, sensitivity, n_iter);
  const std::size_t n_cells = sensitivity.values.size();
  const long n_rows = static_cast<long>(rows.size());
  const long n_cells_l = static_cast<long>(n_cells);
  const std::vector<double>& s = sensitivity.values;

  MlemResult result;
  result.lambda = frozen_start(init, sensitivity);
  std::vector<double>& lambda = result.lambda.values;
  const Transposed cols = transpose(rows, n_cells);
  std::vector<double> denom(rows.size());

  for (int it = 0; it < n_iter; ++it) {
#pragma omp parallel for schedule(dynamic, 16)
    for (long ii = 0; ii < n_rows; ++ii) {
      const auto& row = rows[static_cast<std::size_t>(ii)];
      double acc = 0.0;
      for (std::size_t e = 0; e < row.cells.size(); ++e) {
        acc += row.weights[e] * lambda[row.cells[e]];
      }
      denom[static_cast<std::size_t>(ii)] = acc;
    }
    std::size_t skipped = 0;
    for (double d : denom) skipped += (d > 0.0) ? 0 : 1;

    // Each cell only reads its own lambda, so the update can be in place.
#pragma omp parallel for schedule(static)
    for (long jj = 0; jj < n_cells_l; ++jj) {
      const auto j = static_cast<std::size_t>(jj);
      if (!(s[j] > 0.0)) continue;
      const double lj = lambda[j];
      double acc = 0.0;
      for (std::size_t e = cols.offsets[j]; e < cols.offsets[j + 1]; ++e) {
        const double d = denom[cols.rows[e]];
        if (d > 0.0) acc += cols.weights[e] * lj / d;
      }
      lambda[j] = acc / s[j];
    }
    result.skipped_row_evaluations += skipped;
    result.skipped_rows_last_iteration = skipped;
    ++result.lambda.iteration;
  }
  return result;
}

MlemResult mlem_serial(const LambdaField& init, std::span<const SystemRow> rows,
                       const SensitivityField& sensitivity, int n_iter) {
  check_inputs(init, rows, sensitivity, n_iter);
  const std::vector<double>& s = sensitivity.values;
  MlemResult result;
  result.lambda = frozen_start(init, sensitivity);
  std::vector<double>& lambda = result.lambda.values;
  std::vector<double> ratio(lambda.size());

  for (int it = 0; it < n_iter; ++it) {
    std::fill(ratio.begin(), ratio.end(), 0.0);
    std::size_t skipped = 0;
    for (const auto& row : rows) {
      double denom = 0.0;
      for (std::size_t e = 0; e < row.cells.size(); ++e) {
        denom += row.weights[e] * lambda[row.cells[e]];
      }
      if (!(denom > 0.0)) {
        ++skipped;
        continue;
      }
      for (std::size_t e = 0; e < row.cells.size(); ++e) {
        ratio[row.cells[e]] += row.weights[e] * lambda[row.cells[e]] / denom;
      }
    }
    for (std::size_t j = 0; j < lambda.size(); ++j) {
      if (s[j] > 0.0) lambda[j] = ratio[j] / s[j];
    }
    result.skipped_row_evaluations += skipped;
    result.skipped_rows_last_iteration = skipped;
    ++result.lambda.iteration;
  }
  return result;
}

double log_likelihood(std::span<const SystemRow> rows, const SensitivityField& sensitivity,
                      const LambdaField& lambda) {
  double ll = 0.0;
  for (const auto& row : rows) {
    double proj = 0.0;
    for (std::size_t e = 0; e < row.cells.size(); ++e) {
      proj += row.weights[e] * lambda.values[row.cells[e]];
    }
    if (proj > 0.0) ll += std::log(proj);
  }
  for (std::size_t j = 0; j < lambda.values.size(); ++j) {
    ll -= sensitivity.values[j] * lambda.values[j];
  }
  return ll;
}

}  // namespace cone_mapper::recon
