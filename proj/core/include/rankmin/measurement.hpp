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
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "rankmin/rng.hpp"

namespace rankmin {

using Eigen::Index;
using Eigen::MatrixXd;
using Eigen::VectorXd;

enum class EnsembleKind {
  kGoe,        ///< dense symmetric Gaussian orthogonal ensemble
  kBernoulli,  ///< sparse i.i.d. 0/1 entries, not symmetrized
  kDense,      ///< arbitrary dense matrices (e.g. a reduced SDP)
};

std::string_view to_string(EnsembleKind kind);
EnsembleKind parse_ensemble_kind(std::string_view name);

struct SparseEntry {
  std::uint32_t row;
  std::uint32_t col;
  double value;
};

/// Square matrix held as a coordinate list; entries are sorted row-major and
/// never repeated.
struct SparseMatrix {
  Index n = 0;
  std::vector<SparseEntry> entries;

  MatrixXd to_dense() const;
};

/// One n x n GOE draw: N(0,2) diagonal, N(0,1) strictly upper part mirrored
/// below. The result equals its transpose bit for bit.
MatrixXd sample_goe(Index n, Rng& rng);

/// n x n matrix whose entries are independently 1 with probability rho.
/// Positions are drawn by geometric skipping over the row-major index.
SparseMatrix sample_bernoulli(Index n, double rho, Rng& rng);

/// The m sensing matrices A_1..A_m of an affine map
///   A(X)_i = <A_i, X> = sum_jk (A_i)_jk X_jk,
/// which equals trace(A_i X) whenever A_i or X is symmetric.
///
/// Dense ensembles keep all matrices as the columns of an n^2 x m matrix
/// (column i is vec(A_i), column-major). Sparse ensembles keep a flat
/// coordinate list with per-matrix offsets. Ensembles are immutable once
/// built and may be shared freely between threads.
class MeasurementEnsemble {
 public:
  static MeasurementEnsemble sample_goe_ensemble(Index n, Index m, Rng& rng);
  static MeasurementEnsemble sample_bernoulli_ensemble(Index n, Index m,
                                                       double rho, Rng& rng);
  static MeasurementEnsemble from_dense(const std::vector<MatrixXd>& matrices,
                                        EnsembleKind kind = EnsembleKind::kDense);
  /// Takes ownership of an n^2 x m column store.
  static MeasurementEnsemble from_columns(Index n, MatrixXd columns,
                                          EnsembleKind kind);
  static MeasurementEnsemble from_sparse(Index n,
                                         const std::vector<SparseMatrix>& matrices,
                                         double rho);

  EnsembleKind kind() const { return kind_; }
  Index n() const { return n_; }
  Index m() const { return m_; }
  /// Bernoulli density; 1 for dense ensembles.
  double rho() const { return rho_; }
  bool is_sparse() const { return kind_ == EnsembleKind::kBernoulli; }
  /// True when every A_i is exactly symmetric (always for GOE).
  bool symmetric() const { return symmetric_; }

  /// n^2 x m column store (dense ensembles only).
  const MatrixXd& columns() const;
  Eigen::Map<const MatrixXd> dense_matrix(Index i) const;

  /// Stored entries of A_i (sparse ensembles only).
  std::span<const SparseEntry> sparse_entries(Index i) const;
  std::size_t nonzeros() const;

  /// A_i as a dense matrix, whatever the storage.
  MatrixXd matrix(Index i) const;
  SparseMatrix sparse_matrix(Index i) const;

 private:
  MeasurementEnsemble() = default;

  EnsembleKind kind_ = EnsembleKind::kGoe;
  Index n_ = 0;
  Index m_ = 0;
  double rho_ = 1.0;
  bool symmetric_ = true;
  MatrixXd columns_;
  std::vector<std::size_t> offsets_;
  std::vector<SparseEntry> entries_;
};

/// A(X): the vector of <A_i, X>. Sparse storage touches only stored entries.
VectorXd apply_operator(const MeasurementEnsemble& ensemble, const MatrixXd& X);

/// A^T(alpha) = sum_i alpha_i A_i.
MatrixXd apply_adjoint(const MeasurementEnsemble& ensemble,
                       const VectorXd& alpha);

/// A(Z Z^T) without forming Z Z^T for sparse ensembles.
VectorXd apply_operator_factored(const MeasurementEnsemble& ensemble,
                                 const MatrixXd& Z);

/// sum_i w_i sym(A_i) Z with sym(A) = (A + A^T) / 2.
MatrixXd apply_adjoint_times(const MeasurementEnsemble& ensemble,
                             const VectorXd& weights, const MatrixXd& Z);

/// Planted solution X* = Zstar Zstar^T and its spectrum.
struct GroundTruth {
  MatrixXd zstar;  ///< n x r
  VectorXd sigma;  ///< nonzero eigenvalues of X*, nonincreasing
  double kappa = 1.0;

  static GroundTruth from_factor(const MatrixXd& zstar);
  MatrixXd xstar() const { return zstar * zstar.transpose(); }
  Index rank() const { return zstar.cols(); }
};

/// Sensing problem: A(X) = b, optionally with the planted solution.
struct Instance {
  std::shared_ptr<const MeasurementEnsemble> ensemble;
  VectorXd b;
  std::optional<GroundTruth> truth;
  std::uint64_t seed = 0;

  Index n() const { return ensemble->n(); }
  Index m() const { return ensemble->m(); }
  const GroundTruth& require_truth() const;
};

/// Draws Zstar with i.i.d. N(0,1) entries, then the ensemble, and sets
/// b = A(Zstar Zstar^T). Fully determined by the seed of `rng`.
Instance generate_instance(Index n, Index r, Index m, EnsembleKind kind,
                           double rho, Rng& rng);

/// Instance whose ground truth is replaced by `zstar` (same ensemble and b).
Instance with_truth(const Instance& instance, const MatrixXd& zstar);

}  // namespace rankmin
