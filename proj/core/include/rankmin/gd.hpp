// Copyright 2026 The rankmin Authors. All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstdint>
#include <vector>

#include "rankmin/measurement.hpp"
#include "rankmin/solve_result.hpp"

namespace rankmin {

// Factored gradient descent for PSD affine rank minimization.
//
// The iterate is an n x r factor Z and the estimate is X = Z Z^T. The
// objective is
//
//   f(Z) = 1/(4m) sum_i (<A_i, Z Z^T> - b_i)^2,
//
// initialized spectrally from M = (1/m) sum_i b_i A_i (whose expectation is
// 2 X* for GOE measurements) and minimized with the constant step
// mu / (sum_s |lambda_s| / 2), lambda_s being the top-r eigenvalues of M.

struct GdConfig {
  double mu = 0.8;
  std::int64_t max_iters = 100000;
  /// Converged once the relative error (against truth when known, else the
  /// relative residual) drops below this.
  double rel_err_tol = 1e-5;
  /// Minimum improvement of the objective over 100 iterations.
  double stall_tol = 1e-12;

  void validate() const;
};

double objective(const MatrixXd& Z, const Instance& instance);

/// (1/m) sum_i (<A_i, Z Z^T> - b_i) sym(A_i) Z.
MatrixXd gradient(const MatrixXd& Z, const Instance& instance);

struct SpectralInit {
  MatrixXd Z0;      ///< columns sqrt(|lambda_s| / 2) v_s
  VectorXd lambdas; ///< eigenvalues of M by decreasing magnitude
};

/// M = (1/m) A^T(b), symmetrized.
MatrixXd spectral_matrix(const Instance& instance);

SpectralInit spectral_init(const Instance& instance, Index r);

/// Spectral initialization from an explicit matrix in place of M.
SpectralInit spectral_init_from(const MatrixXd& M, Index r);

SolveResult solve_gd(const Instance& instance, Index r, const GdConfig& config);

/// Gradient descent from a given start with a given step (no initialization).
SolveResult run_gradient_descent(const Instance& instance, MatrixXd Z0,
                                 double step, const GdConfig& config);

struct RankContinuationResult {
  SolveResult result;    ///< run at the accepted rank
  Index rank = 0;
  std::vector<double> residual_per_rank;
};

/// For unknown rank: solve at rank 1, and while the relative residual
/// exceeds config.rel_err_tol, append the next spectral column and solve
/// again, up to max_rank.
RankContinuationResult solve_gd_rank_continuation(const Instance& instance,
                                                  Index max_rank,
                                                  const GdConfig& config);

}  // namespace rankmin
