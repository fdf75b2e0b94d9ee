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

#include "rankmin/gd.hpp"

#include <cmath>
#include <string>

#include "rankmin/error.hpp"
#include "rankmin/linalg.hpp"

namespace rankmin {

namespace {

void check_factor_shape(const MatrixXd& Z, const Instance& instance) {
  if (Z.rows() != instance.n() || Z.cols() < 1) {
    throw ShapeError("factor is " + std::to_string(Z.rows()) + "x" +
                     std::to_string(Z.cols()) + ", expected " +
                     std::to_string(instance.n()) + " rows");
  }
}

double objective_from_residual(const VectorXd& residual) {
  return residual.squaredNorm() / (4.0 * static_cast<double>(residual.size()));
}

double factor_step(const VectorXd& lambdas, double mu) {
  const double denom = lambdas.cwiseAbs().sum() / 2.0;
  // b = 0 gives M = 0 and Z0 = 0, where the gradient vanishes; any step works.
  return denom > 0.0 ? mu / denom : mu;
}

}  // namespace

void GdConfig::validate() const {
  if (!(mu > 0.0)) throw InvalidArgument("mu must be positive");
  if (max_iters < 0) throw InvalidArgument("max_iters must be nonnegative");
  if (!(rel_err_tol > 0.0)) throw InvalidArgument("rel_err_tol must be positive");
  if (!(stall_tol > 0.0)) throw InvalidArgument("stall_tol must be positive");
}

double objective(const MatrixXd& Z, const Instance& instance) {
  check_factor_shape(Z, instance);
  return objective_from_residual(
      apply_operator_factored(*instance.ensemble, Z) - instance.b);
}

MatrixXd gradient(const MatrixXd& Z, const Instance& instance) {
  check_factor_shape(Z, instance);
  const VectorXd residual = apply_operator_factored(*instance.ensemble, Z) - instance.b;
  return apply_adjoint_times(*instance.ensemble, residual, Z) /
         static_cast<double>(instance.m());
}

MatrixXd spectral_matrix(const Instance& instance) {
  MatrixXd M = apply_adjoint(*instance.ensemble, instance.b) /
               static_cast<double>(instance.m());
  if (!instance.ensemble->symmetric()) M = 0.5 * (M + M.transpose()).eval();
  return M;
}

SpectralInit spectral_init_from(const MatrixXd& M, Index r) {
  const EigenPairs pairs = top_r_eigenpairs(M, r);
  SpectralInit init;
  init.lambdas = pairs.values;
  init.Z0 = pairs.vectors;
  for (Index s = 0; s < r; ++s) {
    init.Z0.col(s) *= std::sqrt(std::abs(pairs.values(s)) / 2.0);
  }
  return init;
}

SpectralInit spectral_init(const Instance& instance, Index r) {
  if (r < 1 || r > instance.n()) throw InvalidArgument("rank outside [1, n]");
  return spectral_init_from(spectral_matrix(instance), r);
}

SolveResult run_gradient_descent(const Instance& instance, MatrixXd Z,
                                 double step, const GdConfig& config) {
  config.validate();
  check_factor_shape(Z, instance);
  const auto& ensemble = *instance.ensemble;
  const double inv_m = 1.0 / static_cast<double>(instance.m());
  const TruthMetrics metrics(instance);

  SolveResult out;
  out.method = "gd";
  TraceRecorder recorder;
  ProgressMonitor monitor(config.stall_tol);

  VectorXd residual = apply_operator_factored(ensemble, Z) - instance.b;
  double f = objective_from_residual(residual);
  std::int64_t k = 0;
  std::optional<Termination> done;

  while (true) {
    const double rel = metrics.rel_err_factored(Z);
    recorder.record(k, f, rel, metrics.distance(Z));
    if (auto t = monitor.update(f)) {
      done = t;
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

    Z.noalias() -= (step * inv_m) * apply_adjoint_times(ensemble, residual, Z);
    residual = apply_operator_factored(ensemble, Z) - instance.b;
    const double f_next = objective_from_residual(residual);
    if (f_next > f) ++out.descent_violations;
    f = f_next;
    ++k;
  }

  out.termination = *done;
  out.iterations = k;
  out.final_rel_err = metrics.rel_err_factored(Z);
  if (std::isfinite(f)) {
    recorder.record(k, f, out.final_rel_err, metrics.distance(Z), true);
  } else {
    recorder.record(k, f, kNaN, kNaN, true);
  }
  out.trace = recorder.take();
  out.final_residual = relative_residual(residual + instance.b, instance.b);
  out.estimate = Z * Z.transpose();
  out.factor = std::move(Z);
  if (out.termination == Termination::kDiverged) {
    out.message = "objective became non-finite or grew by 1e6";
  }
  return out;
}

SolveResult solve_gd(const Instance& instance, Index r, const GdConfig& config) {
  config.validate();
  const SpectralInit init = spectral_init(instance, r);
  return run_gradient_descent(instance, init.Z0, factor_step(init.lambdas, config.mu),
                              config);
}

RankContinuationResult solve_gd_rank_continuation(const Instance& instance,
                                                  Index max_rank,
                                                  const GdConfig& config) {
  config.validate();
  if (max_rank < 1 || max_rank > instance.n()) {
    throw InvalidArgument("max_rank outside [1, n]");
  }
  const SpectralInit full = spectral_init_from(spectral_matrix(instance), max_rank);

  RankContinuationResult out;
  MatrixXd Z;
  for (Index r = 1; r <= max_rank; ++r) {
    MatrixXd start(instance.n(), r);
    if (r > 1) start.leftCols(r - 1) = Z;
    start.col(r - 1) = full.Z0.col(r - 1);
    const double step = factor_step(full.lambdas.head(r), config.mu);

    // The planted rank is unknown here, so stop on the residual alone.
    Instance blind = instance;
    blind.truth.reset();
    SolveResult result = run_gradient_descent(blind, std::move(start), step, config);
    out.residual_per_rank.push_back(result.final_residual);
    Z = result.factor;
    out.rank = r;
    if (instance.truth) {
      const TruthMetrics metrics(instance);
      result.final_rel_err = metrics.rel_err_factored(Z);
    }
    out.result = std::move(result);
    if (out.result.final_residual < config.rel_err_tol) break;
  }
  return out;
}

}  // namespace rankmin
