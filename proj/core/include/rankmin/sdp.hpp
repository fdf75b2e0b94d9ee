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

#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "rankmin/baselines.hpp"
#include "rankmin/gd.hpp"
#include "rankmin/measurement.hpp"

namespace rankmin {

// Standard-form SDP with a positive definite cost,
//
//   min trace(C Xt)  s.t.  trace(At_i Xt) = b_i,  Xt PSD,
//
// reduces through C = L L^T to
//
//   min trace(X)  s.t.  trace(A_i X) = b_i,  X PSD,   A_i = L^{-1} At_i L^{-T},
//
// whose minimizers map back by Xt = L^{-T} X L^{-1}. On PSD matrices
// trace(X) is the nuclear norm, so the reduced problem is the nuclear-norm
// relaxation of PSD rank minimization. Whether its minimizer is the
// minimum-rank solution depends on restricted isometry constants that cannot
// be checked at runtime; solve_sdp reports solver residuals only.

struct SdpProblem {
  MatrixXd C;
  std::vector<MatrixXd> A_tilde;
  VectorXd b;

  Index n() const { return C.rows(); }
  Index m() const { return static_cast<Index>(A_tilde.size()); }
  /// Shapes, symmetry, and positive definiteness of C.
  void validate() const;
};

struct SdpReduction {
  MatrixXd L;  ///< lower-triangular Cholesky factor of C
  std::vector<MatrixXd> A;
};

/// Throws InvalidArgument naming the smallest eigenvalue when C is not
/// positive definite (singular PSD costs are rejected, not perturbed).
SdpReduction reduce_sdp(const SdpProblem& problem);

/// Xt = L^{-T} X L^{-1}.
MatrixXd lift_solution(const MatrixXd& X, const MatrixXd& L);

/// Inverse of lift_solution: X = L^T Xt L.
MatrixXd reduce_solution(const MatrixXd& X_tilde, const MatrixXd& L);

/// Trace-minimization instance (dense ensemble, no ground truth).
Instance reduced_instance(const SdpProblem& problem, const SdpReduction& reduction);

enum class SdpMethod { kGd, kSvp, kAdmm };
SdpMethod parse_sdp_method(std::string_view name);

struct SdpSolveConfig {
  SdpMethod method = SdpMethod::kGd;
  /// Target rank for gd and svp.
  Index rank = 1;
  GdConfig gd;
  SvpConfig svp;
  AdmmConfig admm;
};

struct SdpSolution {
  MatrixXd X_tilde;    ///< lifted solution
  MatrixXd X_reduced;  ///< solution of the trace-minimization problem
  double objective = 0.0;  ///< trace(C Xt)
  SolveResult solve;
};

SdpSolution solve_sdp(const SdpProblem& problem, const SdpSolveConfig& config);

// Text format:
//
//   n m
//   b_1 b_2 ... b_m
//   mat row col value      (repeated)
//
// mat is 0 for the cost C and 1..m for the constraints; row and col are
// 1-based. Each symmetric entry is listed once (upper triangle, row <= col)
// and mirrored on load. Lines starting with '#' are comments.
SdpProblem read_sdp(std::istream& in);
SdpProblem read_sdp_file(const std::filesystem::path& path);
void write_sdp(std::ostream& out, const SdpProblem& problem);

}  // namespace rankmin
