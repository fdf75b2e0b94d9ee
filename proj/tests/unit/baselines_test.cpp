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


#include "rankmin/baselines.hpp"

#include <gtest/gtest.h>

#include "oracles.hpp"
#include "rankmin/error.hpp"
#include "rankmin/linalg.hpp"

namespace rankmin {
namespace {

std::vector<MatrixXd> dense_list(const MeasurementEnsemble& e) {
  std::vector<MatrixXd> out;
  for (Index i = 0; i < e.m(); ++i) out.push_back(e.matrix(i));
  return out;
}

MatrixXd gaussian(Index rows, Index cols, Rng& rng) {
  MatrixXd M(rows, cols);
  for (Index j = 0; j < cols; ++j) {
    for (Index i = 0; i < rows; ++i) M(i, j) = rng.normal();
  }
  return M;
}

TEST(SvpTest, FirstStepIsTruncatedGradient) {
  Rng rng(81);
  const Instance inst = generate_instance(12, 2, 50, EnsembleKind::kGoe, 0.0, rng);
  SvpConfig c;
  c.r = 2;
  c.step = 1.0 / (4.0 * 50);
  c.max_iters = 1;
  const SolveResult res = solve_svp(inst, c);
  const MatrixXd want =
      oracle::truncate(c.step * oracle::adjoint(dense_list(*inst.ensemble), inst.b), 2);
  EXPECT_EQ(res.iterations, 1);
  EXPECT_LT((res.estimate - want).norm(), 1e-10 * want.norm());
}

TEST(SvpTest, RecoversSmallInstance) {
  Rng rng(82);
  const Instance inst = generate_instance(20, 1, 200, EnsembleKind::kGoe, 0.0, rng);
  SvpConfig c;
  c.r = 1;
  c.step = 1.0 / (4.0 * 200);
  c.max_iters = 20000;
  const SolveResult res = solve_svp(inst, c);
  EXPECT_EQ(res.termination, Termination::kConverged) << res.final_rel_err;
  EXPECT_EQ(res.method, "svp");
  EXPECT_TRUE(std::isnan(res.trace.back().dist));
}

TEST(SvpTest, HugeStepDiverges) {
  Rng rng(83);
  const Instance inst = generate_instance(15, 1, 60, EnsembleKind::kGoe, 0.0, rng);
  SvpConfig c;
  c.step = 10.0;
  const SolveResult res = solve_svp(inst, c);
  EXPECT_EQ(res.termination, Termination::kDiverged);
}

TEST(SvpTest, RejectsBadConfig) {
  Rng rng(84);
  const Instance inst = generate_instance(8, 1, 20, EnsembleKind::kGoe, 0.0, rng);
  SvpConfig c;
  c.step = -1.0;
  EXPECT_THROW(solve_svp(inst, c), InvalidArgument);
  c = SvpConfig{};
  c.r = 9;
  EXPECT_THROW(solve_svp(inst, c), InvalidArgument);
}

TEST(GramTest, MatchesInnerProducts) {
  Rng rng(85);
  for (const auto kind : {EnsembleKind::kGoe, EnsembleKind::kBernoulli}) {
    const Instance inst = generate_instance(9, 1, 25, kind, 0.2, rng);
    const auto mats = dense_list(*inst.ensemble);
    const MatrixXd G = measurement_gram(*inst.ensemble);
    ASSERT_EQ(G.rows(), 25);
    for (Index i = 0; i < 25; ++i) {
      for (Index j = 0; j < 25; ++j) {
        EXPECT_NEAR(G(i, j), mats[i].cwiseProduct(mats[j]).sum(), 1e-10);
      }
    }
  }
}

TEST(AdmmTest, RecoversSmallInstance) {
  Rng rng(86);
  const Instance inst = generate_instance(15, 1, 90, EnsembleKind::kGoe, 0.0, rng);
  AdmmConfig c;
  c.max_iters = 20000;
  const SolveResult res = solve_nuclear_admm(inst, c);
  EXPECT_EQ(res.termination, Termination::kConverged) << res.final_rel_err;
  EXPECT_EQ(res.method, "admm");
}

TEST(AdmmTest, ObserverSeesSubgradient) {
  // V = (W - X) / eta lies in the subdifferential of the nuclear norm at X:
  // ||V||_2 <= 1 and <V, X> = ||X||_*.
  Rng rng(87);
  const Instance inst = generate_instance(10, 1, 50, EnsembleKind::kGoe, 0.0, rng);
  AdmmConfig c;
  c.max_iters = 300;
  int seen = 0;
  std::int64_t last = 0;
  c.observer = [&](const AdmmIterate& it) {
    EXPECT_EQ(it.iter, last + 1);
    last = it.iter;
    EXPECT_LE(operator_norm(it.V), 1.0 + 1e-9);
    const double nuc = oracle::nuclear_norm(it.X);
    EXPECT_NEAR(it.V.cwiseProduct(it.X).sum(), nuc, 1e-8 * std::max(1.0, nuc));
    EXPECT_EQ(it.alpha.size(), 50);
    ++seen;
  };
  const SolveResult res = solve_nuclear_admm(inst, c);
  EXPECT_EQ(seen, res.iterations);
}

TEST(AdmmTest, ConvergedPointSatisfiesKkt) {
  // At the constrained minimizer A(X) = b and some A^T(y) is a subgradient.
  Rng rng(88);
  const Instance inst = generate_instance(12, 1, 80, EnsembleKind::kGoe, 0.0, rng);
  AdmmConfig c;
  c.max_iters = 50000;
  MatrixXd last_v;
  c.observer = [&](const AdmmIterate& it) { last_v = it.V; };
  const SolveResult res = solve_nuclear_admm(inst, c);
  ASSERT_TRUE(res.converged());
  EXPECT_LT(res.final_residual, 1e-5);
  const double nuc = oracle::nuclear_norm(res.estimate);
  EXPECT_NEAR(last_v.cwiseProduct(res.estimate).sum(), nuc, 1e-6 * nuc);
  EXPECT_LE(operator_norm(last_v), 1.0 + 1e-9);
}

TEST(AdmmTest, RefusesOversizedGram) {
  Rng rng(89);
  const Instance inst = generate_instance(8, 1, 40, EnsembleKind::kGoe, 0.0, rng);
  AdmmConfig c;
  c.max_measurements = 39;
  EXPECT_THROW(solve_nuclear_admm(inst, c), InvalidArgument);
  c = AdmmConfig{};
  c.eta = 0.0;
  EXPECT_THROW(solve_nuclear_admm(inst, c), InvalidArgument);
}

TEST(AltMinTest, UpdateMatchesLeastSquares) {
  // Symmetric measurements leave V = F K (K skew) in the null space of the
  // design when r >= 2, so compare against the minimum-norm solution.
  Rng rng(90);
  for (const auto kind : {EnsembleKind::kGoe, EnsembleKind::kBernoulli}) {
    const Instance inst = generate_instance(6, 2, 40, kind, 0.5, rng);
    const auto mats = dense_list(*inst.ensemble);
    const MatrixXd fixed = gaussian(6, 2, rng);
    for (const bool left : {true, false}) {
      // Column (p, s) of the design is d A(U V^T) / d F(p, s).
      MatrixXd D(40, 12);
      for (Index s = 0; s < 2; ++s) {
        for (Index p = 0; p < 6; ++p) {
          MatrixXd E = MatrixXd::Zero(6, 2);
          E(p, s) = 1.0;
          const MatrixXd X = left ? MatrixXd(E * fixed.transpose())
                                  : MatrixXd(fixed * E.transpose());
          D.col(p + 6 * s) = oracle::apply(mats, X);
        }
      }
      const VectorXd want = D.completeOrthogonalDecomposition().solve(inst.b);
      const MatrixXd got = altmin_update(*inst.ensemble, inst.b, fixed, left, 1e-8);
      EXPECT_LT((got.reshaped() - want).norm(), 1e-6 * want.norm()) << to_string(kind);
    }
  }
}

TEST(AltMinTest, UpdateRecoversFactorFromTruth) {
  Rng rng(93);
  const Instance inst = generate_instance(20, 2, 8 * 20 * 2, EnsembleKind::kGoe, 0.0, rng);
  const MatrixXd& zstar = inst.truth->zstar;
  const MatrixXd U = altmin_update(*inst.ensemble, inst.b, zstar, true, 1e-10);
  EXPECT_LT((U - zstar).norm() / zstar.norm(), 1e-6);
}

TEST(AltMinTest, SingleConstraintFixedPoint) {
  const MeasurementEnsemble e =
      MeasurementEnsemble::from_dense({MatrixXd::Identity(1, 1)}, EnsembleKind::kDense);
  Instance inst;
  inst.ensemble = std::make_shared<const MeasurementEnsemble>(e);
  inst.b = VectorXd::Ones(1);
  AltMinConfig c;
  c.max_iters = 20;
  const SolveResult res = solve_altmin(inst, c);
  EXPECT_NEAR(res.estimate.trace(), 1.0, 1e-8);
}

TEST(AltMinTest, RecoversAsymmetricEnsemble) {
  Rng rng(91);
  const Instance inst = generate_instance(15, 2, 150, EnsembleKind::kBernoulli, 0.2, rng);
  AltMinConfig c;
  c.r = 2;
  const SolveResult res = solve_altmin(inst, c);
  EXPECT_EQ(res.termination, Termination::kConverged) << res.final_rel_err;
  EXPECT_LT(res.final_rel_err, 1e-5);
  EXPECT_EQ(res.method, "altmin");
}

TEST(AltMinTest, ObjectiveIsMonotone) {
  // Exact alternating minimization never increases the objective; on
  // symmetric measurements progress is slow but still monotone.
  Rng rng(94);
  const Instance inst = generate_instance(15, 2, 150, EnsembleKind::kGoe, 0.0, rng);
  AltMinConfig c;
  c.r = 2;
  c.max_iters = 50;
  const SolveResult res = solve_altmin(inst, c);
  EXPECT_EQ(res.descent_violations, 0);
  EXPECT_LT(res.trace.back().f, 1e-2 * res.trace.front().f);
}

TEST(AltMinTest, SingularSystemReportsIllConditioned) {
  // Fewer measurements than unknowns without a ridge.
  Rng rng(92);
  const Instance inst = generate_instance(10, 2, 8, EnsembleKind::kGoe, 0.0, rng);
  AltMinConfig c;
  c.r = 2;
  c.ls_regularization = 0.0;
  const SolveResult res = solve_altmin(inst, c);
  EXPECT_NE(res.termination, Termination::kConverged);
  EXPECT_THROW(altmin_update(*inst.ensemble, inst.b, MatrixXd::Zero(10, 2), true, 0.0),
               NumericError);
}

}  // namespace
}  // namespace rankmin
