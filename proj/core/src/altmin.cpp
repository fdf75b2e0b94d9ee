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

#include <Eigen/QR>
#include <cmath>
#include <optional>

#include "rankmin/baselines.hpp"
#include "rankmin/error.hpp"
#include "rankmin/linalg.hpp"

namespace rankmin {

namespace {

// Design matrix of A(U V^T) as a linear function of the free factor:
//   left:  row i = vec(A_i V)^T     (A(U V^T)_i = <A_i V, U>)
//   right: row i = vec(A_i^T U)^T   (A(U V^T)_i = <A_i^T U, V>)
MatrixXd design_matrix(const MeasurementEnsemble& ensemble, const MatrixXd& fixed,
                       bool left) {
  const Index n = ensemble.n();
  const Index m = ensemble.m();
  const Index r = fixed.cols();
  MatrixXd D(m, n * r);

  if (ensemble.is_sparse()) {
    D.setZero();
    for (Index i = 0; i < m; ++i) {
      for (const auto& e : ensemble.sparse_entries(i)) {
        const Index out_row = left ? e.row : e.col;
        const Index in_row = left ? e.col : e.row;
        for (Index s = 0; s < r; ++s) D(i, out_row + n * s) += e.value * fixed(in_row, s);
      }
    }
    return D;
  }

  if (ensemble.symmetric()) {
    // [A_1 ... A_m]^T F stacks A_i^T F = A_i F in one product.
    const auto blocks = ensemble.columns().reshaped(n, n * m);
    const MatrixXd stacked = blocks.transpose() * fixed;
    for (Index i = 0; i < m; ++i) {
      for (Index s = 0; s < r; ++s) {
        D.row(i).segment(n * s, n) = stacked.col(s).segment(n * i, n).transpose();
      }
    }
    return D;
  }

  for (Index i = 0; i < m; ++i) {
    const auto A = ensemble.dense_matrix(i);
    const MatrixXd P = left ? MatrixXd(A * fixed) : MatrixXd(A.transpose() * fixed);
    D.row(i) = P.reshaped().transpose();
  }
  return D;
}

// Ridge least squares via QR of [D; sqrt(ridge * mean ||d_j||^2) I]; the
// normal equations would square the conditioning of D.
std::optional<MatrixXd> solve_factor(const MatrixXd& D, const VectorXd& b, Index n,
                                     Index r, double ridge) {
  const Index m = D.rows();
  const Index k = D.cols();
  const double mean_sq = D.colwise().squaredNorm().mean();
  MatrixXd stacked(m + k, k);
  stacked.topRows(m) = D;
  stacked.bottomRows(k) =
      MatrixXd::Identity(k, k) * std::sqrt(ridge * (mean_sq > 0.0 ? mean_sq : 1.0));
  VectorXd rhs = VectorXd::Zero(m + k);
  rhs.head(m) = b;
  const Eigen::HouseholderQR<MatrixXd> qr(stacked);
  const auto R = qr.matrixQR().topRows(k).triangularView<Eigen::Upper>();
  const VectorXd diag = R.toDenseMatrix().diagonal().cwiseAbs();
  if (!(diag.minCoeff() > 1e-13 * diag.maxCoeff())) return std::nullopt;
  const VectorXd qtb = (qr.householderQ().transpose() * rhs).head(k);
  const VectorXd x = R.solve(qtb);
  if (!x.allFinite()) return std::nullopt;
  return x.reshaped(n, r);
}

}  // namespace

void AltMinConfig::validate() const {
  if (r < 1) throw InvalidArgument("AltMin rank must be at least 1");
  if (max_iters < 0) throw InvalidArgument("max_iters must be nonnegative");
  if (!(rel_err_tol > 0.0) || !(stall_tol > 0.0)) {
    throw InvalidArgument("tolerances must be positive");
  }
  if (!(ls_regularization >= 0.0)) throw InvalidArgument("ridge must be nonnegative");
}

MatrixXd altmin_update(const MeasurementEnsemble& ensemble, const VectorXd& b,
                       const MatrixXd& fixed, bool left, double ridge) {
  if (fixed.rows() != ensemble.n()) throw ShapeError("factor has wrong row count");
  if (b.size() != ensemble.m()) throw ShapeError("b has wrong length");
  auto solved = solve_factor(design_matrix(ensemble, fixed, left), b, ensemble.n(),
                             fixed.cols(), ridge);
  if (!solved) throw NumericError("least-squares system is singular");
  return *solved;
}

SolveResult solve_altmin(const Instance& instance, const AltMinConfig& config) {
  config.validate();
  const Index n = instance.n();
  const Index r = config.r;
  if (r > n) throw InvalidArgument("AltMin rank exceeds n");
  const auto& ensemble = *instance.ensemble;
  const double four_m = 4.0 * static_cast<double>(instance.m());
  const TruthMetrics metrics(instance);

  SolveResult out;
  out.method = "altmin";
  TraceRecorder recorder;
  ProgressMonitor monitor(config.stall_tol);

  // Spectral start: top-r singular factors of A^T(b) / (2m).
  const MatrixXd M = apply_adjoint(ensemble, instance.b) / (2.0 * instance.m());
  const SvdFactors init = truncated_svd(M, r);
  const VectorXd root = init.S.cwiseSqrt();
  MatrixXd U = init.U * root.asDiagonal();
  MatrixXd V = init.V * root.asDiagonal();

  VectorXd measured = apply_operator(ensemble, U * V.transpose());
  double f = (measured - instance.b).squaredNorm() / four_m;
  std::int64_t k = 0;
  Termination done;
  while (true) {
    const double rel = metrics.rel_err(U * V.transpose());
    recorder.record(k, f, rel, kNaN);
    if (auto t = monitor.update(f)) {
      done = *t;
      break;
    }
    const double progress =
        metrics.has_truth() ? rel : relative_residual(measured, instance.b);
    if (progress < config.rel_err_tol) {
      done = Termination::kConverged;
      break;
    }
    if (k >= config.max_iters) {
      done = Termination::kMaxIters;
      break;
    }

    auto U_next = solve_factor(design_matrix(ensemble, V, true), instance.b, n, r,
                               config.ls_regularization);
    if (!U_next) {
      done = Termination::kIllConditioned;
      out.message = "least-squares system for U is singular";
      break;
    }
    U = std::move(*U_next);
    const MatrixXd E = design_matrix(ensemble, U, false);
    auto V_next = solve_factor(E, instance.b, n, r, config.ls_regularization);
    if (!V_next) {
      done = Termination::kIllConditioned;
      out.message = "least-squares system for V is singular";
      break;
    }
    V = std::move(*V_next);
    measured = E * V.reshaped();
    const double f_next = (measured - instance.b).squaredNorm() / four_m;
    if (f_next > f) ++out.descent_violations;
    f = f_next;
    ++k;
  }

  out.termination = done;
  out.iterations = k;
  out.estimate = U * V.transpose();
  out.final_rel_err = metrics.rel_err(out.estimate);
  out.final_residual = relative_residual(measured, instance.b);
  recorder.record(k, f, std::isfinite(f) ? out.final_rel_err : kNaN, kNaN, true);
  out.trace = recorder.take();
  out.factor = std::move(U);
  return out;
}

}  // namespace rankmin
