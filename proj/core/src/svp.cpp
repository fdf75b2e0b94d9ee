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

#include <cmath>

#include "rankmin/baselines.hpp"
#include "rankmin/error.hpp"
#include "rankmin/linalg.hpp"

namespace rankmin {

void SvpConfig::validate() const {
  if (!(step > 0.0)) throw InvalidArgument("SVP step must be positive");
  if (r < 1) throw InvalidArgument("SVP rank must be at least 1");
  if (max_iters < 0) throw InvalidArgument("max_iters must be nonnegative");
  if (!(rel_err_tol > 0.0) || !(stall_tol > 0.0)) {
    throw InvalidArgument("tolerances must be positive");
  }
}

SolveResult solve_svp(const Instance& instance, const SvpConfig& config) {
  config.validate();
  if (config.r > instance.n()) throw InvalidArgument("SVP rank exceeds n");
  const auto& ensemble = *instance.ensemble;
  const double four_m = 4.0 * static_cast<double>(instance.m());
  const TruthMetrics metrics(instance);
  Rng rng(config.seed);

  SolveResult out;
  out.method = "svp";
  TraceRecorder recorder;
  ProgressMonitor monitor(config.stall_tol);

  MatrixXd X = MatrixXd::Zero(instance.n(), instance.n());
  VectorXd residual = -instance.b;
  double f = residual.squaredNorm() / four_m;
  std::int64_t k = 0;
  Termination done;
  while (true) {
    const double rel = metrics.rel_err(X);
    recorder.record(k, f, rel, kNaN);
    if (auto t = monitor.update(f)) {
      done = *t;
      break;
    }
    const double progress =
        metrics.has_truth() ? rel : relative_residual(residual + instance.b, instance.b);
    if (progress < config.rel_err_tol) {
      done = Termination::kConverged;
      break;
    }
    if (k >= config.max_iters) {
      done = Termination::kMaxIters;
      break;
    }
    X = best_rank_r(X - config.step * apply_adjoint(ensemble, residual), config.r, rng);
    residual = apply_operator(ensemble, X) - instance.b;
    const double f_next = residual.squaredNorm() / four_m;
    if (f_next > f) ++out.descent_violations;
    f = f_next;
    ++k;
  }

  out.termination = done;
  out.iterations = k;
  out.final_rel_err = metrics.rel_err(X);
  out.final_residual = relative_residual(residual + instance.b, instance.b);
  recorder.record(k, f, std::isfinite(f) ? out.final_rel_err : kNaN, kNaN, true);
  out.trace = recorder.take();
  out.estimate = std::move(X);
  if (done == Termination::kDiverged) out.message = "step too large for this ensemble";
  return out;
}

}  // namespace rankmin
