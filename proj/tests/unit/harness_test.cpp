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


#include "rankmin/harness.hpp"

#include <gtest/gtest.h>

#include <json.hpp>
#include <sstream>

#include "rankmin/error.hpp"

namespace rankmin {
namespace {

PhaseCell cell(Method method, Index n, Index r, Index m, int successes, int trials) {
  PhaseCell c;
  c.method = method;
  c.n = n;
  c.r = r;
  c.m = m;
  c.successes = successes;
  c.trials = trials;
  c.probability = static_cast<double>(successes) / trials;
  return c;
}

ExperimentGrid small_grid() {
  ExperimentGrid g;
  g.n_values = {12};
  g.r_values = {1};
  g.m_values = {4, 60};
  g.trials = 6;
  g.seed = 5;
  g.methods = {Method::kGd, Method::kSvp};
  g.configs.gd.mu = 0.3;
  g.configs.gd.max_iters = 2000;
  g.configs.svp.step = 1.0 / (4.0 * 60);
  g.configs.svp.max_iters = 2000;
  return g;
}

TEST(PhaseTest, CellsOrderedAndCounted) {
  const auto cells = run_phase_transition(small_grid());
  ASSERT_EQ(cells.size(), 4u);
  EXPECT_EQ(cells[0].m, 4);
  EXPECT_EQ(cells[0].method, Method::kGd);
  EXPECT_EQ(cells[1].method, Method::kSvp);
  EXPECT_EQ(cells[2].m, 60);
  for (const auto& c : cells) {
    EXPECT_EQ(c.trials, 6);
    EXPECT_GE(c.successes, 0);
    EXPECT_LE(c.successes, c.trials);
    EXPECT_EQ(c.failures.size(), static_cast<std::size_t>(c.trials - c.successes));
    EXPECT_DOUBLE_EQ(c.probability, c.successes / 6.0);
  }
  EXPECT_EQ(cells[0].successes, 0);
  EXPECT_EQ(cells[2].successes, 6);
  EXPECT_EQ(cells[3].successes, 6);
}

TEST(PhaseTest, ThreadCountDoesNotChangeResults) {
  const auto one = run_phase_transition(small_grid(), 1);
  const auto three = run_phase_transition(small_grid(), 3);
  ASSERT_EQ(one.size(), three.size());
  for (std::size_t i = 0; i < one.size(); ++i) {
    EXPECT_EQ(one[i].successes, three[i].successes);
    EXPECT_EQ(one[i].failures, three[i].failures);
  }
}

TEST(PhaseTest, ProgressReportsEveryTrial) {
  std::int64_t calls = 0;
  std::int64_t last_total = 0;
  run_phase_transition(small_grid(), 1, [&](std::int64_t, std::int64_t total) {
    ++calls;
    last_total = total;
  });
  EXPECT_EQ(calls, 2 * 6);
  EXPECT_EQ(last_total, 2 * 6);
}

TEST(PhaseTest, FarAboveTransitionAlwaysSucceeds) {
  ExperimentGrid g;
  g.n_values = {30};
  g.r_values = {1};
  g.m_over_n = {10.0};
  g.trials = 8;
  g.seed = 6;
  g.methods = {Method::kGd, Method::kSvp, Method::kAdmm};
  g.configs.gd.mu = 0.4;
  g.configs.svp.step = 1.0 / (4.0 * 300);
  for (const auto& c : run_phase_transition(g)) {
    EXPECT_EQ(c.successes, c.trials) << to_string(c.method);
  }
}

TEST(PhaseTest, SolverErrorsBecomeFailures) {
  ExperimentGrid g = small_grid();
  g.methods = {Method::kAdmm};
  g.configs.admm.max_measurements = 10;
  const auto cells = run_phase_transition(g);
  ASSERT_EQ(cells.size(), 2u);
  EXPECT_EQ(cells[1].successes, 0);
  ASSERT_FALSE(cells[1].failures.empty());
  EXPECT_NE(cells[1].failures[0].find("max_measurements"), std::string::npos);
}

TEST(PhaseCsvTest, RoundTrip) {
  const std::vector<PhaseCell> cells = {cell(Method::kGd, 60, 1, 90, 3, 40),
                                        cell(Method::kAdmm, 100, 2, 250, 40, 40)};
  std::stringstream ss;
  write_phase_csv(ss, cells);
  EXPECT_EQ(ss.str().substr(0, ss.str().find('\n')), "method,n,r,m,successes,trials,probability");
  const auto back = read_phase_csv(ss);
  ASSERT_EQ(back.size(), 2u);
  for (std::size_t i = 0; i < 2; ++i) {
    EXPECT_EQ(back[i].method, cells[i].method);
    EXPECT_EQ(back[i].n, cells[i].n);
    EXPECT_EQ(back[i].r, cells[i].r);
    EXPECT_EQ(back[i].m, cells[i].m);
    EXPECT_EQ(back[i].successes, cells[i].successes);
    EXPECT_EQ(back[i].trials, cells[i].trials);
    EXPECT_EQ(back[i].probability, cells[i].probability);
  }
}

TEST(PhaseCsvTest, RejectsMalformed) {
  for (const char* text : {"", "method,n\n", "method,n,r,m,successes,trials,probability\ngd,1,1\n",
                           "method,n,r,m,successes,trials,probability\nfoo,1,1,1,1,1,1\n"}) {
    std::istringstream in(text);
    EXPECT_THROW(read_phase_csv(in), ConfigError) << text;
  }
}

TEST(CrossingTest, InterpolatesFirstRise) {
  const std::vector<PhaseCell> cells = {
      cell(Method::kGd, 60, 1, 90, 4, 40),   cell(Method::kGd, 60, 1, 60, 0, 40),
      cell(Method::kGd, 60, 1, 120, 36, 40), cell(Method::kGd, 60, 1, 150, 40, 40),
      cell(Method::kAdmm, 60, 1, 150, 10, 40)};
  // Between m = 90 (0.1) and m = 120 (0.9): 90 + 0.4 / 0.8 * 30.
  EXPECT_DOUBLE_EQ(*phase_crossing(cells, Method::kGd, 60, 1), 105.0);
  EXPECT_FALSE(phase_crossing(cells, Method::kAdmm, 60, 1).has_value());
  EXPECT_FALSE(phase_crossing(cells, Method::kGd, 100, 1).has_value());
  const std::vector<PhaseCell> first = {cell(Method::kGd, 10, 1, 40, 30, 40)};
  EXPECT_EQ(*phase_crossing(first, Method::kGd, 10, 1), 40.0);
}

TEST(IsotonicTest, ViolationScore) {
  EXPECT_EQ(isotonic_violation({}), 0.0);
  EXPECT_EQ(isotonic_violation({0.0, 0.2, 0.2, 1.0}), 0.0);
  // {0.6, 0.4} pools to 0.5.
  EXPECT_DOUBLE_EQ(isotonic_violation({0.0, 0.6, 0.4, 1.0}), 0.1);
  // {1, 0, 0} pools to 1/3.
  EXPECT_NEAR(isotonic_violation({1.0, 0.0, 0.0}), 2.0 / 3.0, 1e-15);
}

BenchConfig small_bench() {
  BenchConfig c;
  c.n = 25;
  c.r = 2;
  c.m = 250;
  c.seed = 8;
  c.configs.gd.mu = 0.3;
  c.configs.svp.step = 1.0 / (4.0 * 250);
  return c;
}

TEST(BenchTest, CurvesAndSummary) {
  const BenchReport rep = run_runtime_bench(small_bench());
  ASSERT_EQ(rep.curves.size(), 3u);
  for (const auto& curve : rep.curves) {
    EXPECT_TRUE(curve.error.empty()) << curve.error;
    ASSERT_TRUE(curve.time_to_target.has_value()) << to_string(curve.method);
    EXPECT_LT(curve.best_rel_err, 1e-5);
    for (std::size_t k = 1; k < curve.result.trace.size(); ++k) {
      EXPECT_GE(curve.result.trace[k].seconds, curve.result.trace[k - 1].seconds);
    }
  }
  const auto doc = nlohmann::json::parse(bench_summary_json(rep));
  ASSERT_EQ(doc["methods"].size(), 3u);
  EXPECT_EQ(doc["methods"][0]["method"], "gd");
  EXPECT_TRUE(doc["methods"][0].contains("time_to_target"));
}

TEST(BenchTest, CsvRoundTrip) {
  BenchConfig c = small_bench();
  c.methods = {Method::kGd};
  const BenchReport rep = run_runtime_bench(c);
  std::stringstream ss;
  write_bench_csv(ss, rep);
  EXPECT_EQ(ss.str().substr(0, ss.str().find('\n')), "method,seconds,rel_err");
  const auto rows = read_bench_csv(ss);
  const auto& trace = rep.curves[0].result.trace;
  ASSERT_EQ(rows.size(), trace.size());
  for (std::size_t k = 0; k < rows.size(); ++k) {
    EXPECT_EQ(rows[k].method, "gd");
    EXPECT_EQ(rows[k].seconds, trace[k].seconds);
    EXPECT_EQ(rows[k].rel_err, trace[k].rel_err);
  }
}

TEST(BenchTest, UnreachedTargetReportsBestError) {
  BenchConfig c = small_bench();
  c.methods = {Method::kGd};
  c.configs.gd.max_iters = 2;
  const BenchReport rep = run_runtime_bench(c);
  EXPECT_FALSE(rep.curves[0].time_to_target.has_value());
  EXPECT_GT(rep.curves[0].best_rel_err, 1e-5);
  EXPECT_TRUE(std::isfinite(rep.curves[0].best_rel_err));
}

TEST(TraceTest, SameSeedSameTrace) {
  TraceConfig c;
  c.n = 30;
  c.m = 200;
  c.seed = 9;
  const TraceReport a = run_convergence_trace(c);
  const TraceReport b = run_convergence_trace(c);
  ASSERT_EQ(a.result.trace.size(), b.result.trace.size());
  for (std::size_t k = 0; k < a.result.trace.size(); ++k) {
    EXPECT_EQ(a.result.trace[k].f, b.result.trace[k].f);
    EXPECT_EQ(a.result.trace[k].dist, b.result.trace[k].dist);
  }
  ASSERT_TRUE(a.rate.has_value());
  EXPECT_LT(a.rate->slope, 0.0);
  const auto doc = nlohmann::json::parse(to_json(a));
  EXPECT_TRUE(doc.contains("slope"));
  EXPECT_TRUE(doc.contains("r_squared"));
}

TEST(TraceTest, SingleIterationHasNoRate) {
  TraceConfig c;
  c.n = 20;
  c.m = 100;
  c.gd.max_iters = 1;
  const TraceReport rep = run_convergence_trace(c);
  EXPECT_GE(rep.result.trace.size(), 2u);
  EXPECT_FALSE(rep.rate.has_value());
  EXPECT_FALSE(rep.rate_error.empty());
}

}  // namespace
}  // namespace rankmin
