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

#include "rankmin/sdp.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "rankmin/error.hpp"

namespace rankmin {

namespace {

MatrixXd symmetrize(const MatrixXd& X) { return 0.5 * (X + X.transpose()); }

bool nearly_symmetric(const MatrixXd& X) {
  return (X - X.transpose()).norm() <= 1e-12 * std::max(1.0, X.norm());
}

// Next line that is neither blank nor a comment.
bool next_data_line(std::istream& in, std::string& line) {
  while (std::getline(in, line)) {
    const auto start = line.find_first_not_of(" \t\r");
    if (start == std::string::npos || line[start] == '#') continue;
    return true;
  }
  return false;
}

}  // namespace

void SdpProblem::validate() const {
  const Index dim = C.rows();
  if (dim < 1 || C.cols() != dim) throw ShapeError("cost must be square and non-empty");
  if (A_tilde.empty()) throw InvalidArgument("SDP needs at least one constraint");
  if (b.size() != m()) throw ShapeError("b length differs from constraint count");
  for (std::size_t i = 0; i < A_tilde.size(); ++i) {
    if (A_tilde[i].rows() != dim || A_tilde[i].cols() != dim) {
      throw ShapeError("constraint " + std::to_string(i + 1) + " has the wrong shape");
    }
    if (!nearly_symmetric(A_tilde[i])) {
      throw InvalidArgument("constraint " + std::to_string(i + 1) + " is not symmetric");
    }
  }
  if (!C.allFinite() || !b.allFinite()) throw NumericError("SDP data must be finite");
  if (!nearly_symmetric(C)) throw InvalidArgument("cost matrix is not symmetric");
  Eigen::SelfAdjointEigenSolver<MatrixXd> eig(symmetrize(C), Eigen::EigenvaluesOnly);
  const double smallest = eig.eigenvalues()(0);
  if (!(smallest > 0.0)) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.6g", smallest);
    throw InvalidArgument(std::string("cost matrix is not positive definite: smallest "
                                      "eigenvalue is ") + buf);
  }
}

SdpReduction reduce_sdp(const SdpProblem& problem) {
  problem.validate();
  const Eigen::LLT<MatrixXd> llt(symmetrize(problem.C));
  if (llt.info() != Eigen::Success) {
    throw FactorizationError("Cholesky factorization of the cost failed");
  }
  SdpReduction out;
  out.L = llt.matrixL();
  const auto L = out.L.triangularView<Eigen::Lower>();
  out.A.reserve(problem.A_tilde.size());
  for (const auto& At : problem.A_tilde) {
    // L^{-1} At L^{-T} = L^{-1} (L^{-1} At)^T for symmetric At.
    const MatrixXd left = L.solve(At);
    out.A.push_back(symmetrize(L.solve(left.transpose())));
  }
  return out;
}

MatrixXd lift_solution(const MatrixXd& X, const MatrixXd& L) {
  if (X.rows() != L.rows() || X.cols() != L.cols()) throw ShapeError("shape mismatch");
  const auto Lt = L.triangularView<Eigen::Lower>().transpose();
  // L^{-T} X L^{-1} = L^{-T} (L^{-T} X^T)^T.
  const MatrixXd left = Lt.solve(X);
  MatrixXd lifted = Lt.solve(left.transpose());
  return X == X.transpose() ? symmetrize(lifted) : lifted;
}

MatrixXd reduce_solution(const MatrixXd& X_tilde, const MatrixXd& L) {
  if (X_tilde.rows() != L.rows() || X_tilde.cols() != L.cols()) {
    throw ShapeError("shape mismatch");
  }
  MatrixXd X = L.transpose() * X_tilde * L;
  return X_tilde == X_tilde.transpose() ? symmetrize(X) : X;
}

Instance reduced_instance(const SdpProblem& problem, const SdpReduction& reduction) {
  Instance instance;
  instance.ensemble = std::make_shared<const MeasurementEnsemble>(
      MeasurementEnsemble::from_dense(reduction.A, EnsembleKind::kDense));
  instance.b = problem.b;
  return instance;
}

SdpMethod parse_sdp_method(std::string_view name) {
  if (name == "gd") return SdpMethod::kGd;
  if (name == "svp") return SdpMethod::kSvp;
  if (name == "admm") return SdpMethod::kAdmm;
  throw InvalidArgument("unknown SDP method '" + std::string(name) + "'");
}

SdpSolution solve_sdp(const SdpProblem& problem, const SdpSolveConfig& config) {
  const SdpReduction reduction = reduce_sdp(problem);
  const Instance instance = reduced_instance(problem, reduction);

  SdpSolution out;
  switch (config.method) {
    case SdpMethod::kGd:
      out.solve = solve_gd(instance, config.rank, config.gd);
      break;
    case SdpMethod::kSvp: {
      SvpConfig svp = config.svp;
      svp.r = config.rank;
      out.solve = solve_svp(instance, svp);
      break;
    }
    case SdpMethod::kAdmm:
      out.solve = solve_nuclear_admm(instance, config.admm);
      break;
  }
  out.X_reduced = out.solve.estimate;
  out.X_tilde = lift_solution(out.X_reduced, reduction.L);
  out.objective = (problem.C.cwiseProduct(out.X_tilde)).sum();
  return out;
}

SdpProblem read_sdp(std::istream& in) {
  std::string line;
  if (!next_data_line(in, line)) throw ConfigError("SDP file is empty");
  Index n = 0;
  Index m = 0;
  {
    std::istringstream header(line);
    if (!(header >> n >> m) || n < 1 || m < 1) {
      throw ConfigError("SDP header must be 'n m' with positive values");
    }
  }
  SdpProblem problem;
  problem.C = MatrixXd::Zero(n, n);
  problem.A_tilde.assign(static_cast<std::size_t>(m), MatrixXd::Zero(n, n));
  problem.b.resize(m);

  Index read = 0;
  while (read < m && next_data_line(in, line)) {
    std::istringstream ss(line);
    double v;
    while (read < m && ss >> v) problem.b(read++) = v;
  }
  if (read < m) throw ConfigError("SDP file ends before all b values");

  while (next_data_line(in, line)) {
    std::istringstream ss(line);
    Index mat, row, col;
    double value;
    if (!(ss >> mat >> row >> col >> value)) {
      throw ConfigError("bad SDP entry line: " + line);
    }
    if (mat < 0 || mat > m || row < 1 || row > n || col < 1 || col > n) {
      throw ConfigError("SDP entry out of range: " + line);
    }
    if (row > col) std::swap(row, col);
    MatrixXd& target = mat == 0 ? problem.C : problem.A_tilde[mat - 1];
    target(row - 1, col - 1) = value;
    target(col - 1, row - 1) = value;
  }
  return problem;
}

SdpProblem read_sdp_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open SDP file " + path.string());
  return read_sdp(in);
}

void write_sdp(std::ostream& out, const SdpProblem& problem) {
  const Index n = problem.n();
  out << n << ' ' << problem.m() << '\n';
  char buf[40];
  for (Index i = 0; i < problem.m(); ++i) {
    std::snprintf(buf, sizeof(buf), "%.17g", problem.b(i));
    out << (i ? " " : "") << buf;
  }
  out << '\n';
  auto emit = [&](Index mat, const MatrixXd& A) {
    for (Index r = 0; r < n; ++r) {
      for (Index c = r; c < n; ++c) {
        if (A(r, c) == 0.0) continue;
        std::snprintf(buf, sizeof(buf), "%.17g", A(r, c));
        out << mat << ' ' << r + 1 << ' ' << c + 1 << ' ' << buf << '\n';
      }
    }
  };
  emit(0, problem.C);
  for (Index i = 0; i < problem.m(); ++i) emit(i + 1, problem.A_tilde[i]);
}

}  // namespace rankmin
