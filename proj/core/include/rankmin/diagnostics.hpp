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
#include <string>
#include <vector>

#include "rankmin/measurement.hpp"
#include "rankmin/solve_result.hpp"

namespace rankmin {

// Monte-Carlo checks of the probabilistic facts the gradient method relies
// on. Each check returns a raw deviation; thresholds are the caller's call.

struct ConcentrationReport {
  Index n = 0;
  Index m = 0;
  Index r = 0;
  int trials = 0;
  std::string statistic;
  std::vector<double> deviations;  ///< one per trial, nonnegative
  double median = 0.0;
  double max = 0.0;

  /// Fills median and max from deviations.
  void summarize();
};

std::string to_json(const ConcentrationReport& report);

struct MeanEstimatorReport {
  Index n = 0;
  Index r = 0;
  int trials = 0;
  std::vector<Index> m_grid;
  /// e(m) = ||M/2 - X*||_F / ||X*||_F averaged over trials.
  std::vector<double> mean_errors;
  std::vector<ConcentrationReport> per_m;
  double slope = 0.0;  ///< log-log slope of e(m) against m
};

std::string to_json(const MeanEstimatorReport& report);

/// ||M/2 - X*||_F / ||X*||_F.
double mean_estimator_error(const MatrixXd& M, const MatrixXd& xstar);

/// For each m, draws `trials` fresh GOE instances from rng.split({m, t}).
MeanEstimatorReport check_mean_estimator(Index n, Index r, const std::vector<Index>& m_grid,
                                         int trials, const Rng& rng, int threads = 1);

struct A1Check {
  double deviation = 0.0;
  double threshold = 0.0;
  bool satisfied() const { return deviation <= threshold; }
};

/// || (1/m) sum_i (u^T A_i u) A_i - 2 u u^T || over m fresh GOE draws.
A1Check check_a1(Index n, Index m, double delta_over_r, const VectorXd& u, Rng& rng);

struct HessianCheck {
  double deviation = 0.0;
  MatrixXd empirical_mean;  ///< (1/m) sum_i A_i x y^T A_i
};

/// Compares (1/m) sum_i A_i x y^T A_i with x^T y I + y x^T in operator norm.
HessianCheck check_hessian_expectation(const VectorXd& x, const VectorXd& y, Index m,
                                       Rng& rng);

/// <grad f(Z), Z - Zbar> - sigma_r ||Z - Zbar||^2 / alpha
///   - ||grad f(Z)||^2 / (beta ||Z*||_F^2),
/// with Zbar the Procrustes-aligned point of the orbit of Z*. Nonnegative
/// means the regularity inequality holds at Z. Throws ConfigError without
/// truth.
double check_regularity(const Instance& instance, const MatrixXd& Z, double alpha,
                        double beta);

/// Z = Z* U + H with U orthonormal and H a random direction of norm
/// t * radius, t uniform on [0, 1); so d(Z, Z*) <= radius.
MatrixXd sample_in_ball(const MatrixXd& zstar, double radius, Rng& rng);

/// Uniformly distributed r x r orthonormal matrix (QR of a Gaussian matrix
/// with the sign of R's diagonal fixed).
MatrixXd random_orthonormal(Index r, Rng& rng);

struct RateEstimate {
  double slope = 0.0;      ///< per-iteration change of log10 dist
  double r_squared = 0.0;
  bool degenerate = false;  ///< zero variance in log dist; r_squared set to 0
  std::int64_t points = 0;
};

/// Least squares of log10(dist) against iteration over the middle 80% of
/// the trace rows with finite positive dist. Throws InsufficientData with
/// fewer than 20 such rows.
RateEstimate estimate_rate(const std::vector<TraceRecord>& trace);

std::string to_json(const RateEstimate& rate);

/// Two-sample Kolmogorov-Smirnov statistic sup |F_a - F_b|.
double ks_statistic(std::vector<double> a, std::vector<double> b);

}  // namespace rankmin
