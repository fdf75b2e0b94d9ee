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

#include "rankmin/linalg.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/QR>
#include <Eigen/SVD>
#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>
#include <vector>

#include "rankmin/error.hpp"

namespace rankmin {

namespace {

bool exactly_symmetric(const MatrixXd& X) {
  return X.rows() == X.cols() && X == X.transpose();
}

void orient(Eigen::Ref<VectorXd> v) {
  Index best = 0;
  for (Index i = 1; i < v.size(); ++i) {
    if (std::abs(v(i)) > std::abs(v(best))) best = i;
  }
  if (v(best) < 0.0) v = -v;
}

MatrixXd thin_q(const MatrixXd& Y) {
  Eigen::HouseholderQR<MatrixXd> qr(Y);
  return qr.householderQ() * MatrixXd::Identity(Y.rows(), Y.cols());
}

// Spectral map applied to a symmetric matrix through its eigenvalues.
template <typename F>
MatrixXd symmetric_spectral_map(const MatrixXd& X, F&& f) {
  Eigen::SelfAdjointEigenSolver<MatrixXd> eig(X);
  if (eig.info() != Eigen::Success) throw NumericError("eigensolver failed");
  VectorXd mapped = eig.eigenvalues().unaryExpr(f);
  return eig.eigenvectors() * mapped.asDiagonal() * eig.eigenvectors().transpose();
}

// Spectral map applied to singular values of a general matrix.
template <typename F>
MatrixXd singular_value_map(const MatrixXd& X, F&& f) {
  Eigen::BDCSVD<MatrixXd> svd(X, Eigen::ComputeThinU | Eigen::ComputeThinV);
  VectorXd mapped = svd.singularValues().unaryExpr(f);
  return svd.matrixU() * mapped.asDiagonal() * svd.matrixV().transpose();
}

}  // namespace

EigenPairs top_r_eigenpairs(const MatrixXd& M, Index r, double tol) {
  if (M.rows() != M.cols()) throw ShapeError("eigenpairs need a square matrix");
  const Index n = M.rows();
  if (r < 1 || r > n) {
    throw InvalidArgument("requested " + std::to_string(r) +
                          " eigenpairs of a " + std::to_string(n) + "x" +
                          std::to_string(n) + " matrix");
  }
  if (!M.allFinite()) throw NumericError("matrix has non-finite entries");

  const MatrixXd S = 0.5 * (M + M.transpose());
  Eigen::SelfAdjointEigenSolver<MatrixXd> eig(S);
  if (eig.info() != Eigen::Success) throw NumericError("eigensolver failed");

  std::vector<Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Index{0});
  const VectorXd& lambda = eig.eigenvalues();
  // Eigen returns ascending values; ties in |lambda| keep the larger value.
  std::stable_sort(order.begin(), order.end(), [&](Index a, Index b) {
    return std::abs(lambda(a)) > std::abs(lambda(b));
  });

  EigenPairs out;
  out.values.resize(r);
  out.vectors.resize(n, r);
  for (Index s = 0; s < r; ++s) {
    const Index k = order[static_cast<std::size_t>(s)];
    out.values(s) = lambda(k);
    out.vectors.col(s) = eig.eigenvectors().col(k);
    orient(out.vectors.col(s));
  }

  const double scale = std::max(S.norm(), std::numeric_limits<double>::min());
  for (Index s = 0; s < r; ++s) {
    const double residual =
        (S * out.vectors.col(s) - out.values(s) * out.vectors.col(s)).norm();
    if (residual > tol * scale) {
      throw NumericError("eigenpair residual " + std::to_string(residual) +
                         " exceeds tolerance");
    }
  }
  return out;
}

double operator_norm(const MatrixXd& M) {
  if (M.size() == 0) return 0.0;
  if (exactly_symmetric(M)) return std::abs(top_r_eigenpairs(M, 1).values(0));
  const MatrixXd gram = M.transpose() * M;
  return std::sqrt(std::max(0.0, top_r_eigenpairs(gram, 1).values(0)));
}

SvdFactors randomized_svd(const MatrixXd& X, Index r, Index oversample,
                          Index power_iters, Rng& rng) {
  const Index k = r + oversample;
  if (r < 1 || oversample < 0 || power_iters < 0) {
    throw InvalidArgument("randomized SVD needs r >= 1 and nonnegative parameters");
  }
  if (k > std::min(X.rows(), X.cols())) {
    throw ShapeError("rank plus oversampling exceeds the matrix dimension");
  }
  Rng sketch_rng = rng.split(rng.next_u64());
  MatrixXd omega(X.cols(), k);
  for (Index j = 0; j < k; ++j) {
    for (Index i = 0; i < X.cols(); ++i) omega(i, j) = sketch_rng.normal();
  }

  MatrixXd Q = thin_q(X * omega);
  for (Index q = 0; q < power_iters; ++q) {
    const MatrixXd W = thin_q(X.transpose() * Q);
    Q = thin_q(X * W);
  }
  const MatrixXd B = Q.transpose() * X;
  Eigen::JacobiSVD<MatrixXd> svd(B, Eigen::ComputeThinU | Eigen::ComputeThinV);

  SvdFactors out;
  out.U = Q * svd.matrixU().leftCols(r);
  out.S = svd.singularValues().head(r);
  out.V = svd.matrixV().leftCols(r);
  return out;
}

SvdFactors truncated_svd(const MatrixXd& X, Index r) {
  if (r < 1 || r > std::min(X.rows(), X.cols())) {
    throw InvalidArgument("truncation rank outside [1, min(rows, cols)]");
  }
  Eigen::BDCSVD<MatrixXd> svd(X, Eigen::ComputeThinU | Eigen::ComputeThinV);
  return {svd.matrixU().leftCols(r), svd.singularValues().head(r),
          svd.matrixV().leftCols(r)};
}

AlignmentResult procrustes_align(const MatrixXd& Z, const MatrixXd& zstar) {
  if (Z.rows() != zstar.rows() || Z.cols() != zstar.cols()) {
    throw ShapeError("Procrustes operands have different shapes");
  }
  const MatrixXd C = zstar.transpose() * Z;
  Eigen::JacobiSVD<MatrixXd> svd(C, Eigen::ComputeFullU | Eigen::ComputeFullV);
  AlignmentResult out;
  out.rotation = svd.matrixU() * svd.matrixV().transpose();
  out.distance = (Z - zstar * out.rotation).norm();
  return out;
}

MatrixXd best_rank_r(const MatrixXd& X, Index r, Rng& rng) {
  const Index dim = std::min(X.rows(), X.cols());
  if (r < 1 || r > dim) throw InvalidArgument("truncation rank outside [1, n]");
  if (r == dim) return X;
  SvdFactors f;
  if (dim < kRandomizedSvdMinDim || r + kDefaultOversample > dim) {
    f = truncated_svd(X, r);
  } else {
    f = randomized_svd(X, r, kDefaultOversample, kDefaultPowerIters, rng);
  }
  return f.U * f.S.asDiagonal() * f.V.transpose();
}

MatrixXd svt_prox(const MatrixXd& X, double eta) {
  if (!(eta >= 0.0)) throw InvalidArgument("threshold must be nonnegative");
  if (exactly_symmetric(X)) {
    // For symmetric X the singular values are |lambda|.
    return symmetric_spectral_map(X, [eta](double l) {
      const double shrunk = std::max(std::abs(l) - eta, 0.0);
      return l < 0.0 ? -shrunk : shrunk;
    });
  }
  return singular_value_map(X, [eta](double s) { return std::max(s - eta, 0.0); });
}

MatrixXd spectral_ball_project(const MatrixXd& X) {
  if (exactly_symmetric(X)) {
    return symmetric_spectral_map(X, [](double l) { return std::clamp(l, -1.0, 1.0); });
  }
  return singular_value_map(X, [](double s) { return std::min(s, 1.0); });
}

}  // namespace rankmin
