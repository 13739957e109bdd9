#pragma once

#include <cstddef>
#include <span>

#include "cone_mapper/recon/fields.hpp"

namespace cone_mapper::recon {

struct MlemResult {
  LambdaField lambda;
  // Row evaluations skipped because sum_k t_ik lambda_k was zero, summed over
  // iterations, and the count in the final iteration.
  std::size_t skipped_row_evaluations = 0;
  std::size_t skipped_rows_last_iteration = 0;
};

/// List-mode MLEM:
///   lambda_j <- lambda_j / s_j * sum_i t_ij / (sum_k t_ik lambda_k)
/// with k running over map cells. Cells with s_j <= 0 are frozen at zero.
/// Rows with a zero denominator are skipped for that iteration.
/// Each term is summed as t_ij lambda_j / denominator, which makes the
/// single-cell case come out as exactly I / s.
///
/// Forward projection runs in parallel over rows and back projection in
/// parallel over cells through a transposed copy of the rows, so every sum is
/// taken in the same order as mlem_serial and the results agree bit for bit.
///
/// Throws ConfigError if n_iter < 1, rows is empty, or sizes disagree.
MlemResult mlem(const LambdaField& init, std::span<const SystemRow> rows,
                const SensitivityField& sensitivity, int n_iter);

MlemResult mlem_serial(const LambdaField& init, std::span<const SystemRow> rows,
                       const SensitivityField& sensitivity, int n_iter);

/// Uniform start: 1 on cells with s_j > 0, 0 elsewhere.
LambdaField uniform_init(const SensitivityField& sensitivity);

/// Poisson list-mode log-likelihood sum_i log(sum_k t_ik lambda_k) - sum_j s_j lambda_j.
/// Rows with zero forward projection are left out.
double log_likelihood(std::span<const SystemRow> rows, const SensitivityField& sensitivity,
                      const LambdaField& lambda);

}  // namespace cone_mapper::recon
