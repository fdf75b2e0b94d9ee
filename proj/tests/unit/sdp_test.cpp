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

#include <gtest/gtest.h>

#include <sstream>

#include "rankmin/error.hpp"

namespace rankmin {
namespace {

MatrixXd gaussian(Index rows, Index cols, Rng& rng) {
  MatrixXd M(rows, cols);
  for (Index j = 0; j < cols; ++j) {
    for (Index i = 0; i < rows; ++i) M(i, j) = rng.normal();
  }
  return M;
}

MatrixXd random_pd(Index n, Rng& rng) {
  const MatrixXd G = gaussian(n, n, rng);
  return G * G.transpose() + MatrixXd::Identity(n, n);
}

MatrixXd random_symmetric(Index n, Rng& rng) {
  const MatrixXd G = gaussian(n, n, rng);
  return 0.5 * (G + G.transpose());
}

double inner(const MatrixXd& A, const MatrixXd& B) { return A.cwiseProduct(B).sum(); }

// C = cost, constraints GOE, b from the planted X~* = L^{-T} Z Z^T L^{-1}.
SdpProblem planted_problem(Index n, Index r, Index m, const MatrixXd& C, Rng& rng,
                           MatrixXd* xtilde = nullptr) {
  SdpProblem p;
  p.C = C;
  for (Index i = 0; i < m; ++i) p.A_tilde.push_back(sample_goe(n, rng));
  const MatrixXd Z = gaussian(n, r, rng);
  const Eigen::LLT<MatrixXd> llt(C);
  const MatrixXd X = lift_solution(Z * Z.transpose(), llt.matrixL());
  p.b.resize(m);
  for (Index i = 0; i < m; ++i) p.b(i) = inner(p.A_tilde[i], X);
  if (xtilde) *xtilde = X;
  return p;
}

TEST(SdpReduceTest, IdentityCostIsNoOp) {
  Rng rng(101);
  SdpProblem p;
  p.C = MatrixXd::Identity(4, 4);
  p.A_tilde = {random_symmetric(4, rng), random_symmetric(4, rng)};
  p.b = VectorXd::Ones(2);
  const SdpReduction red = reduce_sdp(p);
  EXPECT_LT((red.L - MatrixXd::Identity(4, 4)).norm(), 1e-12);
  for (std::size_t i = 0; i < 2; ++i) EXPECT_LT((red.A[i] - p.A_tilde[i]).norm(), 1e-12);
}

TEST(SdpReduceTest, DiagonalCostByHand) {
  SdpProblem p;
  p.C = Eigen::Vector2d(4.0, 1.0).asDiagonal();
  MatrixXd At(2, 2);
  At << 8.0, 2.0, 2.0, 3.0;
  p.A_tilde = {At};
  p.b = VectorXd::Ones(1);
  const SdpReduction red = reduce_sdp(p);
  MatrixXd L(2, 2);
  L << 2.0, 0.0, 0.0, 1.0;
  EXPECT_LT((red.L - L).norm(), 1e-15);
  MatrixXd want(2, 2);
  want << 2.0, 1.0, 1.0, 3.0;
  EXPECT_LT((red.A[0] - want).norm(), 1e-14);
}

TEST(SdpReduceTest, CongruenceIdentity) {
  Rng rng(102);
  SdpProblem p;
  p.C = random_pd(3, rng);
  for (int i = 0; i < 4; ++i) p.A_tilde.push_back(random_symmetric(3, rng));
  p.b = VectorXd::Zero(4);
  const SdpReduction red = reduce_sdp(p);
  for (int t = 0; t < 20; ++t) {
    const MatrixXd X = random_symmetric(3, rng);
    const MatrixXd Xt = lift_solution(X, red.L);
    for (std::size_t i = 0; i < 4; ++i) {
      const double want = inner(red.A[i], X);
      EXPECT_NEAR(inner(p.A_tilde[i], Xt), want, 1e-10 * std::max(1.0, std::abs(want)));
    }
    EXPECT_NEAR(inner(p.C, Xt), X.trace(), 1e-10 * std::max(1.0, std::abs(X.trace())));
  }
  for (const auto& A : red.A) EXPECT_TRUE(A.isApprox(A.transpose(), 0.0) || A == A.transpose());
}

TEST(SdpReduceTest, RejectsIndefiniteCost) {
  SdpProblem p;
  p.C = Eigen::Vector2d(1.0, -0.5).asDiagonal();
  p.A_tilde = {MatrixXd::Identity(2, 2)};
  p.b = VectorXd::Ones(1);
  try {
    reduce_sdp(p);
    FAIL() << "expected InvalidArgument";
  } catch (const InvalidArgument& e) {
    EXPECT_NE(std::string(e.what()).find("-0.5"), std::string::npos) << e.what();
  }
  p.C = Eigen::Vector2d(1.0, 0.0).asDiagonal();
  EXPECT_THROW(reduce_sdp(p), InvalidArgument);
}

TEST(SdpReduceTest, RejectsBadShapes) {
  SdpProblem p;
  p.C = MatrixXd::Identity(3, 3);
  p.A_tilde = {MatrixXd::Identity(2, 2)};
  p.b = VectorXd::Ones(1);
  EXPECT_THROW(reduce_sdp(p), ShapeError);
  p.A_tilde = {MatrixXd::Identity(3, 3)};
  p.b = VectorXd::Ones(2);
  EXPECT_THROW(reduce_sdp(p), ShapeError);
  p.b = VectorXd::Ones(1);
  p.A_tilde[0](0, 1) = 1.0;
  EXPECT_THROW(reduce_sdp(p), InvalidArgument);
}

TEST(SdpLiftTest, IdentityFactor) {
  Rng rng(103);
  const MatrixXd X = random_symmetric(5, rng);
  EXPECT_LT((lift_solution(X, MatrixXd::Identity(5, 5)) - X).norm(), 1e-14);
}

TEST(SdpLiftTest, PreservesRankAndPsd) {
  Rng rng(104);
  const Eigen::LLT<MatrixXd> llt(random_pd(8, rng));
  const MatrixXd Z = gaussian(8, 3, rng);
  const MatrixXd lifted = lift_solution(Z * Z.transpose(), llt.matrixL());
  const Eigen::SelfAdjointEigenSolver<MatrixXd> eig(lifted);
  const double scale = eig.eigenvalues().cwiseAbs().maxCoeff();
  EXPECT_EQ((eig.eigenvalues().array().abs() > 1e-9 * scale).count(), 3);
  EXPECT_GE(eig.eigenvalues().minCoeff(), -1e-9 * lifted.trace());
}

TEST(SdpLiftTest, ReduceAndLiftAreInverse) {
  Rng rng(105);
  const Eigen::LLT<MatrixXd> llt(random_pd(6, rng));
  const MatrixXd L = llt.matrixL();
  const MatrixXd X = random_symmetric(6, rng);
  EXPECT_LT((reduce_solution(lift_solution(X, L), L) - X).norm(), 1e-10 * X.norm());
  EXPECT_LT((lift_solution(reduce_solution(X, L), L) - X).norm(), 1e-10 * X.norm());
}

TEST(SdpLiftTest, RoundTripOfPlantedMinimizer) {
  Rng rng(106);
  MatrixXd xtilde;
  const SdpProblem p = planted_problem(3, 1, 5, random_pd(3, rng), rng, &xtilde);
  const SdpReduction red = reduce_sdp(p);
  const MatrixXd X = reduce_solution(xtilde, red.L);
  for (std::size_t i = 0; i < 5; ++i) {
    EXPECT_NEAR(inner(red.A[i], X), p.b(static_cast<Index>(i)), 1e-10 * p.b.norm());
  }
  EXPECT_LT((lift_solution(X, red.L) - xtilde).norm(), 1e-8 * xtilde.norm());
}

TEST(SdpSolveTest, PlantedIdentityCostGivesTrace) {
  Rng rng(107);
  MatrixXd xtilde;
  const SdpProblem p = planted_problem(20, 2, 200, MatrixXd::Identity(20, 20), rng, &xtilde);
  SdpSolveConfig cfg;
  cfg.rank = 2;
  cfg.gd.mu = 0.3;
  cfg.gd.rel_err_tol = 1e-8;
  const SdpSolution sol = solve_sdp(p, cfg);
  EXPECT_EQ(sol.solve.termination, Termination::kConverged);
  EXPECT_NEAR(sol.objective, xtilde.trace(), 1e-4 * xtilde.trace());
  EXPECT_NEAR(sol.X_reduced.trace(), sol.X_reduced.jacobiSvd().singularValues().sum(),
              1e-8 * sol.X_reduced.trace());
}

TEST(SdpSolveTest, ScalingCostScalesObjective) {
  Rng rng(108);
  const MatrixXd C = random_pd(15, rng);
  SdpProblem p = planted_problem(15, 1, 120, C, rng);
  SdpSolveConfig cfg;
  cfg.rank = 1;
  cfg.gd.mu = 0.3;
  cfg.gd.rel_err_tol = 1e-10;
  const SdpSolution one = solve_sdp(p, cfg);
  p.C *= 2.0;
  const SdpSolution two = solve_sdp(p, cfg);
  EXPECT_NEAR(two.objective, 2.0 * one.objective, 1e-8 * one.objective);
  EXPECT_LT((two.X_tilde - one.X_tilde).norm(), 1e-6 * one.X_tilde.norm());
}

TEST(SdpSolveTest, AdmmAndGdAgree) {
  Rng rng(109);
  const Index n = 60;
  const MatrixXd G = gaussian(n, n, rng);
  const MatrixXd C = MatrixXd::Identity(n, n) + G * G.transpose() / (4.0 * n);
  SdpProblem p = planted_problem(n, 1, 6 * n, C, rng);
  SdpSolveConfig cfg;
  cfg.rank = 1;
  cfg.gd.mu = 0.4;
  cfg.method = SdpMethod::kGd;
  const SdpSolution gd = solve_sdp(p, cfg);
  cfg.method = SdpMethod::kAdmm;
  const SdpSolution admm = solve_sdp(p, cfg);
  ASSERT_TRUE(gd.solve.converged());
  ASSERT_TRUE(admm.solve.converged());
  EXPECT_NEAR(admm.objective, gd.objective, 1e-3 * std::abs(gd.objective));
}

TEST(SdpMethodTest, Parse) {
  EXPECT_EQ(parse_sdp_method("gd"), SdpMethod::kGd);
  EXPECT_EQ(parse_sdp_method("svp"), SdpMethod::kSvp);
  EXPECT_EQ(parse_sdp_method("admm"), SdpMethod::kAdmm);
  EXPECT_THROW(parse_sdp_method("altmin"), InvalidArgument);
}

TEST(SdpFormatTest, RoundTripIsExact) {
  Rng rng(110);
  SdpProblem p;
  p.C = random_pd(4, rng);
  for (int i = 0; i < 3; ++i) p.A_tilde.push_back(random_symmetric(4, rng));
  p.A_tilde[1](2, 3) = p.A_tilde[1](3, 2) = 0.0;
  p.b = gaussian(3, 1, rng);
  std::stringstream ss;
  write_sdp(ss, p);
  const SdpProblem q = read_sdp(ss);
  EXPECT_TRUE(q.C == p.C);
  EXPECT_TRUE(q.b == p.b);
  ASSERT_EQ(q.m(), 3);
  for (std::size_t i = 0; i < 3; ++i) EXPECT_TRUE(q.A_tilde[i] == p.A_tilde[i]);
}

TEST(SdpFormatTest, ParsesCommentsAndMirrors) {
  std::istringstream in(
      "# tiny problem\n"
      "2 1\n"
      "\n"
      "3.5\n"
      "0 1 1 2\n"
      "0 2 2 1\n"
      "# lower-triangle entry is mirrored too\n"
      "1 2 1 0.5\n");
  const SdpProblem p = read_sdp(in);
  EXPECT_EQ(p.n(), 2);
  EXPECT_EQ(p.b(0), 3.5);
  EXPECT_EQ(p.C(0, 0), 2.0);
  EXPECT_EQ(p.A_tilde[0](0, 1), 0.5);
  EXPECT_EQ(p.A_tilde[0](1, 0), 0.5);
}

TEST(SdpFormatTest, RejectsMalformedInput) {
  for (const char* text : {"", "2\n", "2 2\n1\n", "2 1\n1\n0 3 1 1\n", "2 1\n1\n2 1 1 1\n",
                           "2 1\n1\n0 1 x 1\n"}) {
    std::istringstream in(text);
    EXPECT_THROW(read_sdp(in), ConfigError) << text;
  }
  EXPECT_THROW(read_sdp_file("/nonexistent/problem.sdp"), ConfigError);
}

}  // namespace
}  // namespace rankmin
