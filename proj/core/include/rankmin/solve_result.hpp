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

#include <chrono>
#include <cstdint>
#include <deque>
#include <iosfwd>
#include <limits>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "rankmin/measurement.hpp"

namespace rankmin {

enum class Termination {
  kConverged,
  kMaxIters,
  kStalled,
  kDiverged,
  kIllConditioned,
};

std::string_view to_string(Termination t);

inline constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

/// One row of a solver trace. rel_err and dist are NaN when unavailable
/// (no ground truth, or dist for solvers without a factor iterate).
struct TraceRecord {
  std::int64_t iter = 0;
  double f = 0.0;
  double rel_err = kNaN;
  double dist = kNaN;
  double seconds = 0.0;
};

struct SolveResult {
  std::string method;
  MatrixXd factor;    ///< n x r iterate Z (gd; AltMin left factor U)
  MatrixXd estimate;  ///< X-hat, n x n
  std::vector<TraceRecord> trace;
  Termination termination = Termination::kMaxIters;
  std::string message;
  std::int64_t iterations = 0;
  double final_rel_err = kNaN;   ///< ||X-hat - X*||_F / ||X*||_F
  double final_residual = kNaN;  ///< ||A(X-hat) - b|| / ||b||
  /// Steps where the objective increased (recorded, not fatal).
  std::int64_t descent_violations = 0;

  bool converged() const { return termination == Termination::kConverged; }
};

/// CSV with header `iter,f,rel_err,dist,seconds`; doubles printed with 17
/// significant digits so a read-back is exact.
void write_trace_csv(std::ostream& out, const std::vector<TraceRecord>& trace);
std::vector<TraceRecord> read_trace_csv(std::istream& in);

/// Relative error against the planted solution. X* is formed once.
class TruthMetrics {
 public:
  explicit TruthMetrics(const Instance& instance);

  bool has_truth() const { return has_truth_; }
  /// ||Z Z^T - X*||_F / ||X*||_F, NaN without truth.
  double rel_err_factored(const MatrixXd& Z) const;
  double rel_err(const MatrixXd& X) const;
  /// Procrustes distance d(Z, Zstar), NaN without truth.
  double distance(const MatrixXd& Z) const;

 private:
  bool has_truth_ = false;
  MatrixXd zstar_;
  MatrixXd xstar_;
  double xstar_norm_ = 1.0;
};

/// ||A(X) - b|| / ||b|| (absolute when b = 0).
double relative_residual(const VectorXd& measured, const VectorXd& b);

/// Appends trace rows: every iteration up to 10^4, then every 10th, plus any
/// row explicitly forced (the final one). Times come from a steady clock
/// started at construction.
class TraceRecorder {
 public:
  static constexpr std::int64_t kDenseLimit = 10000;
  static constexpr std::int64_t kSparseStride = 10;

  TraceRecorder();

  void record(std::int64_t iter, double f, double rel_err, double dist,
              bool force = false);
  double elapsed() const;
  std::vector<TraceRecord> take() { return std::move(trace_); }

 private:
  std::chrono::steady_clock::time_point start_;
  std::vector<TraceRecord> trace_;
};

/// Divergence and stall detection shared by all solvers.
///
/// Diverged: objective non-finite or above 10^6 times its first value.
/// Stalled: the best objective seen improved by less than stall_tol over the
/// last `window` iterations.
class ProgressMonitor {
 public:
  ProgressMonitor(double stall_tol, std::int64_t window = 100);

  std::optional<Termination> update(double f);
  /// Forget the stall history (used while an iterate is still identically 0).
  void reset_stall_window();

 private:
  double stall_tol_;
  std::int64_t window_;
  std::optional<double> initial_;
  double best_ = std::numeric_limits<double>::infinity();
  std::deque<double> best_history_;
};

}  // namespace rankmin
