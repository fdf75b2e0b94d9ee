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

#include <Eigen/Dense>

#include "rankmin/rng.hpp"

namespace rankmin {

using Eigen::Index;
using Eigen::MatrixXd;
using Eigen::VectorXd;

/// Eigenpairs ordered by decreasing |lambda|. Each vector is signed so that
/// its largest-magnitude entry is positive (lowest index wins ties).
struct EigenPairs {
  VectorXd values;
  MatrixXd vectors;  ///< n x r, orthonormal columns
};

/// The r eigenpairs of largest magnitude of (M + M^T) / 2.
///
/// Throws NumericError on non-finite input or when a returned pair has
/// residual ||M v - lambda v|| above tol * ||M||_F, InvalidArgument when r is
/// outside [1, n].
EigenPairs top_r_eigenpairs(const MatrixXd& M, Index r, double tol = 1e-8);

/// Operator 2-norm, computed as the top eigenvalue magnitude of the
/// symmetrized matrix (symmetric input) or sqrt of that of M^T M.
double operator_norm(const MatrixXd& M);

struct SvdFactors {
  MatrixXd U;  ///< n x r
  VectorXd S;  ///< r, nonincreasing
  MatrixXd V;  ///< n x r
};

inline constexpr Index kDefaultOversample = 8;
inline constexpr Index kDefaultPowerIters = 2;
/// best_rank_r switches to the randomized SVD at this dimension.
inline constexpr Index kRandomizedSvdMinDim = 64;

/// Randomized range finder with subspace (power) iteration followed by an
/// SVD of the small projected matrix. Draws its test matrix from a child
/// stream of `rng`.
SvdFactors randomized_svd(const MatrixXd& X, Index r, Index oversample,
                          Index power_iters, Rng& rng);

/// Truncated SVD from a full decomposition.
SvdFactors truncated_svd(const MatrixXd& X, Index r);

struct AlignmentResult {
  MatrixXd rotation;  ///< r x r orthonormal U
  double distance = 0.0;  ///< ||Z - Zstar U||_F
};

/// Orthonormal U minimizing ||Z - Zstar U||_F: with Zstar^T Z = P S Q^T,
/// U = P Q^T.
AlignmentResult procrustes_align(const MatrixXd& Z, const MatrixXd& zstar);

/// Eckart-Young truncation. Full SVD below kRandomizedSvdMinDim, randomized
/// SVD with default parameters otherwise.
MatrixXd best_rank_r(const MatrixXd& X, Index r, Rng& rng);

/// Singular value soft-thresholding U max(S - eta, 0) V^T.
MatrixXd svt_prox(const MatrixXd& X, double eta);

/// Projection onto the unit spectral-norm ball, U min(S, 1) V^T.
MatrixXd spectral_ball_project(const MatrixXd& X);

}  // namespace rankmin
