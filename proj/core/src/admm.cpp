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

#include <Eigen/Cholesky>
#include <Eigen/Sparse>
#include <cmath>
#include <string>
#include <vector>

#include "rankmin/baselines.hpp"
#include "rankmin/error.hpp"
#include "rankmin/linalg.hpp"

namespace rankmin {

void AdmmConfig::validate() const {
  if (!(lambda > 0.0)) throw InvalidArgument("ADMM lambda must be positive");
  if (!(eta > 0.0)) throw InvalidArgument("ADMM eta must be positive");
  if (max_iters < 0) throw InvalidArgument("max_iters must be nonnegative");
  if (!(rel_err_tol > 0.0) || !(stall_tol > 0.0)) {
    throw InvalidArgument("tolerances must be positive");
  }
  if (max_measurements < 1) throw InvalidArgument("max_measurements must be positive");
}

MatrixXd measurement_gram(const MeasurementEnsemble& ensemble) {
  const Index m = ensemble.m();
  if (!ensemble.is_sparse()) {
    MatrixXd G = MatrixXd::Zero(m, m);
    G.selfadjointView<Eigen::Lower>().rankUpdate(ensemble.columns().transpose());
    return G.selfadjointView<Eigen::Lower>();
  }
  const Index n = ensemble.n();
  std::vector<Eigen::Triplet<double, std::int64_t>> triplets;
  triplets.reserve(ensemble.nonzeros());
  for (Index i = 0; i < m; ++i) {
    for (const auto& e : ensemble.sparse_entries(i)) {
      triplets.emplace_back(i, static_cast<std::int64_t>(e.col) * n + e.row, e.value);
    }
  }
  Eigen::SparseMatrix<double, Eigen::RowMajor, std::int64_t> A(m, n * n);
  A.setFromTriplets(triplets.begin(), triplets.end());
  const Eigen::SparseMatrix<double, Eigen::RowMajor, std::int64_t> G =
      A * A.transpose();
  return MatrixXd(G);
}

SolveResult solve_nuclear_admm(const Instance& instance, const AdmmConfig& config) {
  config.validate();
  const auto& ensemble = *instance.ensemble;
  const Index n = instance.n();
  const Index m = instance.m();
  if (m > config.max_measurements) {
    throw InvalidArgument("ADMM Gram matrix would be " + std::to_string(m) + "x" +
                          std::to_string(m) + "; raise max_measurements to allow it");
  }
  const double eta = config.eta;
  const double four_m = 4.0 * static_cast<double>(m);
  const TruthMetrics metrics(instance);

  SolveResult out;
  out.method = "admm";
  TraceRecorder recorder;

  // lambda I + eta G, factored once.
  const MatrixXd gram = measurement_gram(ensemble);
  MatrixXd system = eta * gram;
  system.diagonal().array() += config.lambda;
  const Eigen::LLT<MatrixXd> chol(system);
  if (chol.info() != Eigen::Success) {
    throw FactorizationError(
        "lambda I + eta A A^T is numerically singular; increase lambda");
  }

  ProgressMonitor monitor(config.stall_tol);
  VectorXd alpha = VectorXd::Zero(m);
  VectorXd gram_alpha = VectorXd::Zero(m);  // A(A^T(alpha)) = G alpha
  MatrixXd X = MatrixXd::Zero(n, n);
  VectorXd measured = VectorXd::Zero(m);       // A(X^k)
  VectorXd measured_prev = VectorXd::Zero(m);  // A(X^{k-1})
  double f = instance.b.squaredNorm() / four_m;
  std::int64_t k = 0;
  Termination done;

  while (true) {
    const double rel = metrics.rel_err(X);
    recorder.record(k, f, rel, kNaN);
    if (auto t = monitor.update(f)) {
      done = *t;
      break;
    }
    // The iterate sits at 0 until A^T(alpha) outgrows the threshold; that
    // plateau is not a stall.
    if (measured.isZero(0.0)) monitor.reset_stall_window();
    const double progress = metrics.has_truth()
                                ? rel
                                : relative_residual(measured, instance.b);
    if (progress < config.rel_err_tol) {
      done = Termination::kConverged;
      break;
    }
    if (k >= config.max_iters) {
      done = Termination::kMaxIters;
      break;
    }

    const VectorXd rhs =
        instance.b + eta * gram_alpha + measured_prev - 2.0 * measured;
    alpha = chol.solve(rhs);
    gram_alpha.noalias() = gram * alpha;
    MatrixXd W = eta * apply_adjoint(ensemble, alpha) + X;
    if (ensemble.symmetric()) W = 0.5 * (W + W.transpose()).eval();
    MatrixXd X_next = svt_prox(W, eta);
    if (config.observer) {
      const MatrixXd V = (W - X_next) / eta;
      config.observer(AdmmIterate{k + 1, alpha, X_next, V});
    }
    X = std::move(X_next);
    measured_prev = measured;
    measured = apply_operator(ensemble, X);
    const double f_next = (measured - instance.b).squaredNorm() / four_m;
    if (f_next > f) ++out.descent_violations;
    f = f_next;
    ++k;
  }

  out.termination = done;
  out.iterations = k;
  out.final_rel_err = metrics.rel_err(X);
  out.final_residual = relative_residual(measured, instance.b);
  recorder.record(k, f, std::isfinite(f) ? out.final_rel_err : kNaN, kNaN, true);
  out.trace = recorder.take();
  out.estimate = std::move(X);
  return out;
}

}  // namespace rankmin
