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

#include "rankmin/measurement.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <numbers>
#include <string>

#include "rankmin/error.hpp"

namespace rankmin {

namespace {

void fill_goe(Eigen::Ref<MatrixXd> A, Rng& rng) {
  const Index n = A.rows();
  for (Index j = 0; j < n; ++j) {
    A(j, j) = std::numbers::sqrt2 * rng.normal();
    for (Index k = j + 1; k < n; ++k) {
      const double v = rng.normal();
      A(j, k) = v;
      A(k, j) = v;
    }
  }
}

void check_square(const MeasurementEnsemble& ensemble, const MatrixXd& X) {
  if (X.rows() != ensemble.n() || X.cols() != ensemble.n()) {
    throw ShapeError("operator input is " + std::to_string(X.rows()) + "x" +
                     std::to_string(X.cols()) + ", ensemble dimension is " +
                     std::to_string(ensemble.n()));
  }
}

void check_weights(const MeasurementEnsemble& ensemble, const VectorXd& w) {
  if (w.size() != ensemble.m()) {
    throw ShapeError("weight vector has length " + std::to_string(w.size()) +
                     ", ensemble has " + std::to_string(ensemble.m()) +
                     " matrices");
  }
}

void check_factor(const MeasurementEnsemble& ensemble, const MatrixXd& Z) {
  if (Z.rows() != ensemble.n()) {
    throw ShapeError("factor has " + std::to_string(Z.rows()) +
                     " rows, ensemble dimension is " +
                     std::to_string(ensemble.n()));
  }
}

}  // namespace

std::string_view to_string(EnsembleKind kind) {
  switch (kind) {
    case EnsembleKind::kGoe:
      return "goe";
    case EnsembleKind::kBernoulli:
      return "bernoulli";
    case EnsembleKind::kDense:
      return "dense";
  }
  return "unknown";
}

EnsembleKind parse_ensemble_kind(std::string_view name) {
  if (name == "goe") return EnsembleKind::kGoe;
  if (name == "bernoulli" || name == "sparse") return EnsembleKind::kBernoulli;
  if (name == "dense") return EnsembleKind::kDense;
  throw InvalidArgument("unknown ensemble kind '" + std::string(name) + "'");
}

MatrixXd SparseMatrix::to_dense() const {
  MatrixXd A = MatrixXd::Zero(n, n);
  for (const auto& e : entries) A(e.row, e.col) += e.value;
  return A;
}

MatrixXd sample_goe(Index n, Rng& rng) {
  if (n < 1) throw InvalidArgument("GOE dimension must be at least 1");
  MatrixXd A(n, n);
  fill_goe(A, rng);
  return A;
}

SparseMatrix sample_bernoulli(Index n, double rho, Rng& rng) {
  if (n < 1) throw InvalidArgument("Bernoulli dimension must be at least 1");
  if (!(rho > 0.0 && rho <= 1.0)) {
    throw InvalidArgument("Bernoulli density must lie in (0, 1], got " +
                          std::to_string(rho));
  }
  SparseMatrix A{n, {}};
  const std::uint64_t total = static_cast<std::uint64_t>(n) * n;
  if (rho == 1.0) {
    A.entries.reserve(total);
    for (std::uint64_t idx = 0; idx < total; ++idx) {
      A.entries.push_back({static_cast<std::uint32_t>(idx / n),
                           static_cast<std::uint32_t>(idx % n), 1.0});
    }
    return A;
  }
  // Gaps between successes of i.i.d. Bernoulli(rho) trials are geometric.
  const double log_fail = std::log1p(-rho);
  double position = -1.0;
  while (true) {
    const double gap = std::floor(std::log(rng.uniform_open_zero()) / log_fail);
    position += gap + 1.0;
    if (position >= static_cast<double>(total)) break;
    const auto idx = static_cast<std::uint64_t>(position);
    A.entries.push_back({static_cast<std::uint32_t>(idx / n),
                         static_cast<std::uint32_t>(idx % n), 1.0});
  }
  return A;
}

MeasurementEnsemble MeasurementEnsemble::sample_goe_ensemble(Index n, Index m,
                                                             Rng& rng) {
  if (n < 1) throw InvalidArgument("ensemble dimension must be at least 1");
  if (m < 1) throw InvalidArgument("ensemble needs at least one matrix");
  MatrixXd columns(n * n, m);
  for (Index i = 0; i < m; ++i) {
    Eigen::Map<MatrixXd> A(columns.col(i).data(), n, n);
    fill_goe(A, rng);
  }
  return from_columns(n, std::move(columns), EnsembleKind::kGoe);
}

MeasurementEnsemble MeasurementEnsemble::sample_bernoulli_ensemble(
    Index n, Index m, double rho, Rng& rng) {
  if (m < 1) throw InvalidArgument("ensemble needs at least one matrix");
  std::vector<SparseMatrix> matrices;
  matrices.reserve(m);
  for (Index i = 0; i < m; ++i) matrices.push_back(sample_bernoulli(n, rho, rng));
  return from_sparse(n, matrices, rho);
}

MeasurementEnsemble MeasurementEnsemble::from_dense(
    const std::vector<MatrixXd>& matrices, EnsembleKind kind) {
  if (matrices.empty()) throw InvalidArgument("ensemble needs at least one matrix");
  if (kind == EnsembleKind::kBernoulli) {
    throw InvalidArgument("Bernoulli ensembles use sparse storage");
  }
  const Index n = matrices.front().rows();
  MatrixXd columns(n * n, static_cast<Index>(matrices.size()));
  for (std::size_t i = 0; i < matrices.size(); ++i) {
    const auto& A = matrices[i];
    if (A.rows() != n || A.cols() != n) {
      throw ShapeError("measurement matrix " + std::to_string(i) +
                       " is not " + std::to_string(n) + "x" + std::to_string(n));
    }
    columns.col(static_cast<Index>(i)) = A.reshaped();
  }
  return from_columns(n, std::move(columns), kind);
}

MeasurementEnsemble MeasurementEnsemble::from_columns(Index n, MatrixXd columns,
                                                      EnsembleKind kind) {
  if (n < 1) throw InvalidArgument("ensemble dimension must be at least 1");
  if (columns.rows() != n * n || columns.cols() < 1) {
    throw ShapeError("column store must be n^2 x m with m >= 1");
  }
  if (!columns.allFinite()) throw NumericError("measurement matrices must be finite");
  MeasurementEnsemble e;
  e.kind_ = kind;
  e.n_ = n;
  e.m_ = columns.cols();
  e.rho_ = 1.0;
  e.symmetric_ = true;
  if (kind != EnsembleKind::kGoe) {
    for (Index i = 0; i < e.m_ && e.symmetric_; ++i) {
      Eigen::Map<const MatrixXd> A(columns.col(i).data(), n, n);
      e.symmetric_ = A == A.transpose();
    }
  }
  e.columns_ = std::move(columns);
  return e;
}

MeasurementEnsemble MeasurementEnsemble::from_sparse(
    Index n, const std::vector<SparseMatrix>& matrices, double rho) {
  if (n < 1) throw InvalidArgument("ensemble dimension must be at least 1");
  if (matrices.empty()) throw InvalidArgument("ensemble needs at least one matrix");
  if (!(rho > 0.0 && rho <= 1.0)) throw InvalidArgument("density must lie in (0, 1]");
  MeasurementEnsemble e;
  e.kind_ = EnsembleKind::kBernoulli;
  e.n_ = n;
  e.m_ = static_cast<Index>(matrices.size());
  e.rho_ = rho;
  e.symmetric_ = false;
  std::size_t total = 0;
  for (const auto& A : matrices) total += A.entries.size();
  e.entries_.reserve(total);
  e.offsets_.reserve(matrices.size() + 1);
  e.offsets_.push_back(0);
  for (std::size_t i = 0; i < matrices.size(); ++i) {
    const auto& A = matrices[i];
    if (A.n != n) {
      throw ShapeError("sparse measurement " + std::to_string(i) +
                       " has the wrong dimension");
    }
    for (const auto& entry : A.entries) {
      if (entry.row >= n || entry.col >= n) {
        throw ShapeError("sparse entry out of range in measurement " +
                         std::to_string(i));
      }
      if (!std::isfinite(entry.value)) {
        throw NumericError("measurement matrices must be finite");
      }
      e.entries_.push_back(entry);
    }
    e.offsets_.push_back(e.entries_.size());
  }
  return e;
}

const MatrixXd& MeasurementEnsemble::columns() const {
  if (is_sparse()) throw ConfigError("sparse ensemble has no dense column store");
  return columns_;
}

Eigen::Map<const MatrixXd> MeasurementEnsemble::dense_matrix(Index i) const {
  return Eigen::Map<const MatrixXd>(columns().col(i).data(), n_, n_);
}

std::span<const SparseEntry> MeasurementEnsemble::sparse_entries(Index i) const {
  if (!is_sparse()) throw ConfigError("dense ensemble has no coordinate list");
  return {entries_.data() + offsets_[i], offsets_[i + 1] - offsets_[i]};
}

std::size_t MeasurementEnsemble::nonzeros() const {
  if (is_sparse()) return entries_.size();
  return static_cast<std::size_t>((columns_.array() != 0.0).count());
}

MatrixXd MeasurementEnsemble::matrix(Index i) const {
  if (i < 0 || i >= m_) throw ShapeError("measurement index out of range");
  if (is_sparse()) return sparse_matrix(i).to_dense();
  return dense_matrix(i);
}

SparseMatrix MeasurementEnsemble::sparse_matrix(Index i) const {
  if (i < 0 || i >= m_) throw ShapeError("measurement index out of range");
  SparseMatrix A{n_, {}};
  if (is_sparse()) {
    auto entries = sparse_entries(i);
    A.entries.assign(entries.begin(), entries.end());
    return A;
  }
  const auto dense = dense_matrix(i);
  for (Index r = 0; r < n_; ++r) {
    for (Index c = 0; c < n_; ++c) {
      if (dense(r, c) != 0.0) {
        A.entries.push_back({static_cast<std::uint32_t>(r),
                             static_cast<std::uint32_t>(c), dense(r, c)});
      }
    }
  }
  return A;
}

VectorXd apply_operator(const MeasurementEnsemble& ensemble, const MatrixXd& X) {
  check_square(ensemble, X);
  if (!ensemble.is_sparse()) {
    return ensemble.columns().transpose() * X.reshaped();
  }
  VectorXd out(ensemble.m());
  for (Index i = 0; i < ensemble.m(); ++i) {
    double acc = 0.0;
    for (const auto& e : ensemble.sparse_entries(i)) acc += e.value * X(e.row, e.col);
    out(i) = acc;
  }
  return out;
}

MatrixXd apply_adjoint(const MeasurementEnsemble& ensemble, const VectorXd& alpha) {
  check_weights(ensemble, alpha);
  const Index n = ensemble.n();
  if (!ensemble.is_sparse()) {
    VectorXd flat = ensemble.columns() * alpha;
    return flat.reshaped(n, n);
  }
  MatrixXd S = MatrixXd::Zero(n, n);
  for (Index i = 0; i < ensemble.m(); ++i) {
    const double a = alpha(i);
    if (a == 0.0) continue;
    for (const auto& e : ensemble.sparse_entries(i)) S(e.row, e.col) += a * e.value;
  }
  return S;
}

VectorXd apply_operator_factored(const MeasurementEnsemble& ensemble,
                                 const MatrixXd& Z) {
  check_factor(ensemble, Z);
  if (!ensemble.is_sparse()) {
    const MatrixXd X = Z * Z.transpose();
    return ensemble.columns().transpose() * X.reshaped();
  }
  const MatrixXd Zt = Z.transpose();
  VectorXd out(ensemble.m());
  for (Index i = 0; i < ensemble.m(); ++i) {
    double acc = 0.0;
    for (const auto& e : ensemble.sparse_entries(i)) {
      acc += e.value * Zt.col(e.row).dot(Zt.col(e.col));
    }
    out(i) = acc;
  }
  return out;
}

MatrixXd apply_adjoint_times(const MeasurementEnsemble& ensemble,
                             const VectorXd& weights, const MatrixXd& Z) {
  check_weights(ensemble, weights);
  check_factor(ensemble, Z);
  const Index n = ensemble.n();
  if (!ensemble.is_sparse()) {
    VectorXd flat = ensemble.columns() * weights;
    auto S = flat.reshaped(n, n);
    if (ensemble.symmetric()) return S * Z;
    return 0.5 * (S * Z + S.transpose() * Z);
  }
  const MatrixXd Zt = Z.transpose();
  MatrixXd Gt = MatrixXd::Zero(Z.cols(), n);
  for (Index i = 0; i < ensemble.m(); ++i) {
    const double w = 0.5 * weights(i);
    if (w == 0.0) continue;
    for (const auto& e : ensemble.sparse_entries(i)) {
      const double a = w * e.value;
      Gt.col(e.row) += a * Zt.col(e.col);
      Gt.col(e.col) += a * Zt.col(e.row);
    }
  }
  return Gt.transpose();
}

GroundTruth GroundTruth::from_factor(const MatrixXd& zstar) {
  if (zstar.rows() < 1 || zstar.cols() < 1) {
    throw InvalidArgument("ground-truth factor must be non-empty");
  }
  if (!zstar.allFinite()) throw NumericError("ground-truth factor must be finite");
  // Nonzero eigenvalues of Zstar Zstar^T are those of the r x r Gram matrix.
  Eigen::SelfAdjointEigenSolver<MatrixXd> eig(zstar.transpose() * zstar,
                                              Eigen::EigenvaluesOnly);
  const Index r = zstar.cols();
  GroundTruth truth;
  truth.zstar = zstar;
  truth.sigma = eig.eigenvalues().reverse();
  if (!(truth.sigma(r - 1) > 0.0)) {
    throw InvalidArgument("ground-truth factor is rank deficient");
  }
  truth.kappa = truth.sigma(0) / truth.sigma(r - 1);
  return truth;
}

const GroundTruth& Instance::require_truth() const {
  if (!truth) throw ConfigError("operation requires an instance with ground truth");
  return *truth;
}

Instance generate_instance(Index n, Index r, Index m, EnsembleKind kind,
                           double rho, Rng& rng) {
  if (n < 1) throw InvalidArgument("dimension must be at least 1");
  if (r < 1 || r > n) {
    throw InvalidArgument("rank " + std::to_string(r) + " outside [1, " +
                          std::to_string(n) + "]");
  }
  if (m < 1) throw InvalidArgument("need at least one measurement");

  Rng factor_rng = rng.split(1);
  MatrixXd zstar(n, r);
  for (Index s = 0; s < r; ++s) {
    for (Index j = 0; j < n; ++j) zstar(j, s) = factor_rng.normal();
  }

  Rng ensemble_rng = rng.split(2);
  std::shared_ptr<const MeasurementEnsemble> ensemble;
  switch (kind) {
    case EnsembleKind::kGoe:
      ensemble = std::make_shared<const MeasurementEnsemble>(
          MeasurementEnsemble::sample_goe_ensemble(n, m, ensemble_rng));
      break;
    case EnsembleKind::kBernoulli:
      ensemble = std::make_shared<const MeasurementEnsemble>(
          MeasurementEnsemble::sample_bernoulli_ensemble(n, m, rho, ensemble_rng));
      break;
    case EnsembleKind::kDense:
      throw InvalidArgument("random instances are GOE or Bernoulli");
  }

  Instance instance;
  instance.ensemble = std::move(ensemble);
  instance.b = apply_operator_factored(*instance.ensemble, zstar);
  instance.truth = GroundTruth::from_factor(zstar);
  instance.seed = rng.seed();
  return instance;
}

Instance with_truth(const Instance& instance, const MatrixXd& zstar) {
  if (zstar.rows() != instance.n()) throw ShapeError("truth factor has wrong row count");
  Instance copy = instance;
  copy.truth = GroundTruth::from_factor(zstar);
  return copy;
}

}  // namespace rankmin
