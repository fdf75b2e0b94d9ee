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


// Randomized invariants checked over many seeds.

#include <gtest/gtest.h>

#include <cmath>

#include "oracles.hpp"
#include "rankmin/baselines.hpp"
#include "rankmin/diagnostics.hpp"
#include "rankmin/gd.hpp"
#include "rankmin/harness.hpp"
#include "rankmin/linalg.hpp"
#include "rankmin/measurement.hpp"

namespace rankmin {
namespace {

MatrixXd gaussian(Index rows, Index cols, Rng& rng) {
  MatrixXd M(rows, cols);
  for (Index i = 0; i < M.size(); ++i) M.data()[i] = rng.normal();
  return M;
}

TEST(ProcrustesProperty, NoRandomRotationDoesBetter) {
  const Rng root(21);
  for (std::uint64_t k = 0; k < 100; ++k) {
    Rng rng = root.split(k);
    const Index r = 1 + static_cast<Index>(k % 4);
    const MatrixXd Z = gaussian(10, r, rng);
    const MatrixXd zstar = gaussian(10, r, rng);
    const double best = procrustes_align(Z, zstar).distance;
    for (int t = 0; t < 200; ++t) {
      const MatrixXd U = random_orthonormal(r, rng);
      ASSERT_LE(best, (Z - zstar * U).norm() + 1e-9) << "pair " << k;
    }
  }
}

TEST(EckartYoungProperty, BeatsRandomProjections) {
  Rng rng(22);
  for (int k = 0; k < 10; ++k) {
    const MatrixXd X = gaussian(12, 9, rng);
    const Index r = 1 + k % 4;
    const SvdFactors f = truncated_svd(X, r);
    const double best = (X - f.U * f.S.asDiagonal() * f.V.transpose()).norm();
    for (int t = 0; t < 50; ++t) {
      const MatrixXd Q = gaussian(12, r, rng).householderQr().householderQ() *
                         MatrixXd::Identity(12, r);
      ASSERT_LE(best, (X - Q * Q.transpose() * X).norm() + 1e-12);
    }
  }
}

TEST(ProxProperty, OperatorsAreNonexpansive) {
  Rng rng(23);
  for (int k = 0; k < 50; ++k) {
    const MatrixXd X = gaussian(8, 8, rng);
    const MatrixXd Y = X + (k % 2 ? 0.1 : 3.0) * gaussian(8, 8, rng);
    const double d = (X - Y).norm();
    const double eta = 0.2 * (1 + k % 5);
    EXPECT_LE((svt_prox(X, eta) - svt_prox(Y, eta)).norm(), d + 1e-9);
    EXPECT_LE((spectral_ball_project(X) - spectral_ball_project(Y)).norm(), d + 1e-9);
  }
}

TEST(GdProperty, SolveDependsOnlyOnTheOrbitOfTheTruth) {
  for (std::uint64_t seed : {1, 2, 3}) {
    Rng rng(seed);
    const Instance inst = generate_instance(25, 2, 250, EnsembleKind::kGoe, 0.0, rng);
    const MatrixXd U0 = random_orthonormal(2, rng);
    const Instance rotated = with_truth(inst, inst.truth->zstar * U0);
    GdConfig config;
    config.mu = 0.5;
    const SolveResult a = solve_gd(inst, 2, config);
    const SolveResult b = solve_gd(rotated, 2, config);
    ASSERT_EQ(a.trace.size(), b.trace.size());
    EXPECT_EQ(a.factor, b.factor);
    for (std::size_t k = 0; k < a.trace.size(); ++k) {
      EXPECT_EQ(a.trace[k].f, b.trace[k].f);
      EXPECT_NEAR(a.trace[k].rel_err, b.trace[k].rel_err, 1e-12);
      EXPECT_NEAR(a.trace[k].dist, b.trace[k].dist, 1e-10 * (1.0 + a.trace[k].dist));
    }
  }
}

TEST(GdProperty, DescendsMonotonicallyAtTheStableStep) {
  for (const auto& [r, mu] : {std::pair<Index, double>{1, 0.4}, {2, 0.6}}) {
    int clean = 0;
    for (std::uint64_t s = 0; s < 20; ++s) {
      Rng rng = Rng(263).split(s);
      const Instance inst = generate_instance(40, r, 240, EnsembleKind::kGoe, 0.0, rng);
      GdConfig config;
      config.mu = mu;
      config.max_iters = 3000;
      if (solve_gd(inst, r, config).descent_violations == 0) ++clean;
    }
    EXPECT_GE(clean, 19) << "r = " << r;
  }
}

TEST(SolverProperty, ConvergedEstimatesFitTheMeasurements) {
  MethodConfigs configs;
  configs.gd.mu = 0.4;
  configs.svp.step = 1.0 / (4.0 * 300.0);
  for (std::uint64_t seed : {4, 5}) {
    Rng rng(seed);
    const Instance inst = generate_instance(20, 1, 300, EnsembleKind::kGoe, 0.0, rng);
    for (const Method method : {Method::kGd, Method::kSvp, Method::kAdmm}) {
      const SolveResult res = run_method(method, inst, 1, configs);
      ASSERT_TRUE(res.converged()) << to_string(method);
      EXPECT_LT(relative_residual(apply_operator(*inst.ensemble, res.estimate), inst.b), 1e-4)
          << to_string(method);
    }
  }
}

TEST(SvpProperty, EstimateRankNeverExceedsTarget) {
  for (const double step : {1e-4, 1e-3, 1e-2}) {
    Rng rng(6);
    const Instance inst = generate_instance(15, 2, 60, EnsembleKind::kGoe, 0.0, rng);
    SvpConfig config;
    config.r = 2;
    config.step = step;
    config.max_iters = 50;
    const SolveResult res = solve_svp(inst, config);
    if (!res.estimate.allFinite()) continue;
    Eigen::JacobiSVD<MatrixXd> svd(res.estimate);
    const VectorXd s = svd.singularValues();
    for (Index i = 2; i < s.size(); ++i) EXPECT_LE(s(i), 1e-10 * s(0)) << "step " << step;
  }
}

TEST(AdmmProperty, LargerLambdaShrinksTheEstimate) {
  Rng rng(7);
  const Instance inst = generate_instance(10, 1, 60, EnsembleKind::kGoe, 0.0, rng);
  std::vector<double> norms;
  for (const double lambda : {1e-2, 1e2, 1e3, 1e4}) {
    AdmmConfig config;
    config.lambda = lambda;
    config.eta = 1.0;
    config.max_iters = 3000;
    const SolveResult res = solve_nuclear_admm(inst, config);
    norms.push_back(oracle::nuclear_norm(res.estimate));
  }
  for (std::size_t k = 1; k < norms.size(); ++k) EXPECT_LE(norms[k], norms[k - 1]);
  EXPECT_LT(norms[1], norms[0]);
  EXPECT_LT(norms.back(), 1e-3 * inst.truth->sigma(0));
}

TEST(PhaseProperty, SuccessRateIsNearlyMonotoneInM) {
  ExperimentGrid grid;
  grid.n_values = {20};
  grid.r_values = {1};
  grid.m_over_n.clear();
  grid.m_values = {20, 30, 40, 50, 60, 80, 100};
  grid.trials = 20;
  grid.seed = 8;
  grid.configs.gd.mu = 0.3;
  grid.configs.gd.max_iters = 2000;
  const auto cells = run_phase_transition(grid, 2);
  std::vector<double> p;
  for (const auto& c : cells) p.push_back(c.probability);
  EXPECT_LE(isotonic_violation(p), 0.1);
  EXPECT_LT(p.front(), 0.5);
  EXPECT_EQ(p.back(), 1.0);
}

}  // namespace
}  // namespace rankmin
