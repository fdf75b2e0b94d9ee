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
#include <functional>

#include "rankmin/measurement.hpp"
#include "rankmin/solve_result.hpp"

namespace rankmin {

// Comparison solvers. All three report through SolveResult with the same
// termination taxonomy as solve_gd and leave `dist` NaN in their traces
// (their iterates are not PSD factors).

/// Singular value projection: X <- P_r(X - step * A^T(A(X) - b)) from X = 0.
struct SvpConfig {
  double step = 1e-4;
  Index r = 1;
  std::int64_t max_iters = 100000;
  double rel_err_tol = 1e-5;
  double stall_tol = 1e-12;
  /// Seed for the randomized SVD sketches.
  std::uint64_t seed = 0;

  void validate() const;
};

SolveResult solve_svp(const Instance& instance, const SvpConfig& config);

/// State passed to an AdmmConfig observer after each iteration.
struct AdmmIterate {
  std::int64_t iter;
  const VectorXd& alpha;
  const MatrixXd& X;
  /// Dual variable V = (W - X) / eta, equal to the projection of W / eta
  /// onto the unit spectral ball.
  const MatrixXd& V;
};

/// Nuclear-norm minimization, min 1/(2 lambda) ||A(X) - b||^2 + ||X||_*,
/// by ADMM on the dual in its condensed two-step form:
///
///   alpha+ = (lambda I + eta G)^{-1} (b + A(eta A^T(alpha) + X- - 2 X))
///   X+     = prox_eta(eta A^T(alpha+) + X)
///
/// with G the m x m Gram matrix <A_i, A_j>, Cholesky-factored once. The
/// multiplier sequence X is the primal estimate. X^{-1} = X^0 = 0, alpha^0 = 0.
struct AdmmConfig {
  double lambda = 1e-5;
  double eta = 100.0;
  std::int64_t max_iters = 100000;
  double rel_err_tol = 1e-5;
  double stall_tol = 1e-12;
  /// The Gram matrix is m x m and dense; refuse larger m.
  Index max_measurements = 20000;
  /// Optional per-iteration hook (tests, diagnostics). Costs one extra
  /// n x n matrix per iteration when set.
  std::function<void(const AdmmIterate&)> observer;

  void validate() const;
};

/// <A_i, A_j> for all pairs; dense storage uses a rank update, sparse storage
/// a sparse-sparse product without forming the m x n^2 matrix densely.
MatrixXd measurement_gram(const MeasurementEnsemble& ensemble);

SolveResult solve_nuclear_admm(const Instance& instance, const AdmmConfig& config);

/// Alternating least squares on X = U V^T.
struct AltMinConfig {
  Index r = 1;
  std::int64_t max_iters = 1000;
  double rel_err_tol = 1e-5;
  double stall_tol = 1e-12;
  /// Ridge added to each normal-equation system, relative to the mean of
  /// its diagonal.
  double ls_regularization = 1e-10;

  void validate() const;
};

/// Least-squares update of one factor with the other held fixed:
/// `left == true` solves for U given V, else for V given U.
MatrixXd altmin_update(const MeasurementEnsemble& ensemble, const VectorXd& b,
                       const MatrixXd& fixed, bool left, double ridge);

SolveResult solve_altmin(const Instance& instance, const AltMinConfig& config);

}  // namespace rankmin
