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

#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "rankmin/config.hpp"
#include "rankmin/diagnostics.hpp"
#include "rankmin/solve_result.hpp"

namespace rankmin {

/// A trial succeeds when the final relative Frobenius error is below this.
inline constexpr double kRecoveryTolerance = 1e-5;

/// Runs `method` on `instance` with the rank of svp/altmin set to r.
SolveResult run_method(Method method, const Instance& instance, Index r,
                       const MethodConfigs& configs);

struct PhaseCell {
  Method method = Method::kGd;
  Index n = 0;
  Index r = 0;
  Index m = 0;
  int successes = 0;
  int trials = 0;
  double probability = 0.0;
  /// "trial <t>: <reason>" for every failed trial.
  std::vector<std::string> failures;
};

/// Called after each finished trial with (done, total).
using ProgressFn = std::function<void(std::int64_t, std::int64_t)>;

/// For every (n, r, m, trial) the instance is drawn from
/// Rng(grid.seed).split({n, r, m, trial}), so results do not depend on the
/// thread count. Cells come back ordered by n, r, m, then method order.
std::vector<PhaseCell> run_phase_transition(const ExperimentGrid& grid, int threads = 1,
                                            const ProgressFn& progress = {});

/// CSV `method,n,r,m,successes,trials,probability`.
void write_phase_csv(std::ostream& out, const std::vector<PhaseCell>& cells);
std::vector<PhaseCell> read_phase_csv(std::istream& in);

/// Measurement count where the success probability of (method, n, r) first
/// rises through 0.5, linearly interpolated between neighbouring cells.
std::optional<double> phase_crossing(const std::vector<PhaseCell>& cells, Method method,
                                     Index n, Index r);

/// Largest absolute deviation between `values` and their nondecreasing
/// least-squares fit (pool-adjacent-violators).
double isotonic_violation(const std::vector<double>& values);

struct BenchCurve {
  Method method = Method::kGd;
  SolveResult result;
  /// Seconds at the first trace row with rel_err below the target.
  std::optional<double> time_to_target;
  double best_rel_err = kNaN;
  std::string error;  ///< set when the solver threw
};

struct BenchReport {
  BenchConfig config;
  std::vector<BenchCurve> curves;
};

/// All methods run on one instance drawn from Rng(config.seed).
BenchReport run_runtime_bench(const BenchConfig& config);

/// CSV `method,seconds,rel_err`, one row per trace point.
void write_bench_csv(std::ostream& out, const BenchReport& report);

struct BenchRow {
  std::string method;
  double seconds = 0.0;
  double rel_err = kNaN;
};
std::vector<BenchRow> read_bench_csv(std::istream& in);

/// Per-method time-to-target, best error, termination, and iterations.
std::string bench_summary_json(const BenchReport& report);

struct TraceReport {
  SolveResult result;
  std::optional<RateEstimate> rate;
  std::string rate_error;  ///< why `rate` is empty
};

/// solve_gd on an instance drawn from Rng(config.seed), then estimate_rate.
TraceReport run_convergence_trace(const TraceConfig& config);

std::string to_json(const TraceReport& report);

}  // namespace rankmin
