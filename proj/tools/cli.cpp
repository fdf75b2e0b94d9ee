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


#include "cli.hpp"

#include <CLI11.hpp>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <optional>
#include <string>

#include "rankmin/baselines.hpp"
#include "rankmin/config.hpp"
#include "rankmin/diagnostics.hpp"
#include "rankmin/error.hpp"
#include "rankmin/gd.hpp"
#include "rankmin/harness.hpp"
#include "rankmin/instance_io.hpp"
#include "rankmin/sdp.hpp"

namespace rankmin::cli {

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitFailure = 2;

struct GlobalOptions {
  std::uint64_t seed = 0;
  bool seed_given = false;
  fs::path out = ".";
  std::string config;
  int threads = 1;
};

// Solver overrides shared by `solve` and `sdp`.
struct SolverFlags {
  std::optional<double> mu, step, lambda, eta, tol;
  std::optional<std::int64_t> max_iters;

  void add_to(CLI::App* cmd) {
    cmd->add_option("--mu", mu, "gd step multiplier");
    cmd->add_option("--step", step, "svp step size");
    cmd->add_option("--lambda", lambda, "admm data-fit weight");
    cmd->add_option("--eta", eta, "admm penalty");
    cmd->add_option("--tol", tol, "convergence tolerance on relative error");
    cmd->add_option("--max-iters", max_iters, "iteration cap");
  }

  void apply(MethodConfigs& c) const {
    if (mu) c.gd.mu = *mu;
    if (step) c.svp.step = *step;
    if (lambda) c.admm.lambda = *lambda;
    if (eta) c.admm.eta = *eta;
    if (tol) {
      c.gd.rel_err_tol = c.svp.rel_err_tol = c.admm.rel_err_tol = c.altmin.rel_err_tol = *tol;
    }
    if (max_iters) {
      c.gd.max_iters = c.svp.max_iters = c.admm.max_iters = c.altmin.max_iters = *max_iters;
    }
  }
};

json number(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

void ensure_dir(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw ConfigError("cannot create output directory " + dir.string());
}

std::ofstream open_out(const fs::path& path) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write " + path.string());
  return out;
}

void write_text(const fs::path& path, const std::string& text) {
  auto out = open_out(path);
  out << text << '\n';
}

std::optional<ConfigFile> load_config(const GlobalOptions& g) {
  if (g.config.empty()) return std::nullopt;
  return ConfigFile::load(g.config);
}

json result_json(const SolveResult& r) {
  return json{{"method", r.method},
              {"termination", to_string(r.termination)},
              {"iterations", r.iterations},
              {"final_rel_err", number(r.final_rel_err)},
              {"final_residual", number(r.final_residual)},
              {"descent_violations", r.descent_violations},
              {"message", r.message}};
}

bool solver_failed(const SolveResult& r) {
  return r.termination == Termination::kDiverged ||
         r.termination == Termination::kIllConditioned;
}

int cmd_gen(const GlobalOptions& g, Index n, Index r, std::optional<Index> m,
            std::optional<double> m_over_n, const std::string& ensemble, double rho) {
  if (m.has_value() == m_over_n.has_value()) {
    throw ConfigError("gen needs exactly one of --m and --m-over-n");
  }
  const Index count = m ? *m : static_cast<Index>(std::llround(*m_over_n * n));
  Rng rng(g.seed);
  const Instance instance =
      generate_instance(n, r, count, parse_ensemble_kind(ensemble), rho, rng);
  write_instance(instance, g.out);
  std::cerr << "wrote instance n=" << n << " r=" << r << " m=" << count << " to "
            << g.out.string() << '\n';
  return kExitOk;
}

int cmd_solve(const GlobalOptions& g, const std::string& method_name,
              const std::string& instance_dir, std::optional<Index> rank,
              const SolverFlags& flags) {
  const Method method = parse_method(method_name);
  const Instance instance = read_instance(instance_dir);
  MethodConfigs configs;
  if (auto file = load_config(g)) apply_method_sections(*file, configs);
  flags.apply(configs);
  configs.svp.seed = g.seed_given ? g.seed : instance.seed;
  const Index r = rank ? *rank : (instance.truth ? instance.truth->rank() : 1);

  const SolveResult result = run_method(method, instance, r, configs);
  ensure_dir(g.out);
  {
    auto out = open_out(g.out / "trace.csv");
    write_trace_csv(out, result.trace);
  }
  write_text(g.out / "result.json", result_json(result).dump(2));
  std::cerr << result.method << ": " << to_string(result.termination) << " after "
            << result.iterations << " iterations\n";
  return solver_failed(result) ? kExitFailure : kExitOk;
}

int cmd_phase(const GlobalOptions& g) {
  auto file = load_config(g);
  if (!file) throw ConfigError("phase needs --config");
  ExperimentGrid grid = grid_from_config(*file);
  if (g.seed_given) grid.seed = g.seed;
  const auto cells = run_phase_transition(grid, g.threads, [](std::int64_t done,
                                                              std::int64_t total) {
    if (done == total || done % 50 == 0) std::cerr << "trials " << done << '/' << total << '\n';
  });
  ensure_dir(g.out);
  {
    auto out = open_out(g.out / "phase.csv");
    write_phase_csv(out, cells);
  }
  auto failures = open_out(g.out / "phase_failures.txt");
  for (const auto& c : cells) {
    for (const auto& f : c.failures) {
      failures << to_string(c.method) << " n=" << c.n << " r=" << c.r << " m=" << c.m << ' '
               << f << '\n';
    }
  }
  write_phase_csv(std::cout, cells);
  return kExitOk;
}

int cmd_bench(const GlobalOptions& g, const std::string& scenario, std::optional<Index> n) {
  BenchConfig config;
  if (auto file = load_config(g)) {
    config = bench_from_config(*file);
  } else if (scenario == "sparse") {
    config = BenchConfig::sparse_scenario();
  } else if (scenario == "dense") {
    config = BenchConfig::dense_scenario();
  } else {
    throw ConfigError("--scenario must be dense or sparse");
  }
  if (n) {
    const double ratio = static_cast<double>(config.m) / static_cast<double>(config.n);
    config.n = *n;
    config.m = static_cast<Index>(std::llround(ratio * static_cast<double>(*n)));
  }
  if (g.seed_given) config.seed = g.seed;
  const BenchReport report = run_runtime_bench(config);
  ensure_dir(g.out);
  {
    auto out = open_out(g.out / "bench.csv");
    write_bench_csv(out, report);
  }
  const std::string summary = bench_summary_json(report);
  write_text(g.out / "bench_summary.json", summary);
  std::cout << summary << '\n';
  return kExitOk;
}

int cmd_trace(const GlobalOptions& g, std::optional<std::int64_t> max_iters) {
  TraceConfig config;
  if (auto file = load_config(g)) config = trace_from_config(*file);
  if (g.seed_given) config.seed = g.seed;
  if (max_iters) config.gd.max_iters = *max_iters;
  const TraceReport report = run_convergence_trace(config);
  ensure_dir(g.out);
  {
    auto out = open_out(g.out / "trace.csv");
    write_trace_csv(out, report.result.trace);
  }
  const std::string rate = to_json(report);
  write_text(g.out / "rate.json", rate);
  std::cout << rate << '\n';
  return solver_failed(report.result) ? kExitFailure : kExitOk;
}

struct CheckOptions {
  Index n = 40;
  Index r = 1;
  std::optional<Index> m;
  int trials = 20;
  std::string m_multiples = "2,4,8,16";
  std::string u = "e1";
  double threshold = 0.5;
  int samples = 100;
  double alpha = 24.0;
  std::optional<double> beta;
  std::string trace_path;
};

int emit_check(const GlobalOptions& g, const std::string& name, const std::string& doc) {
  ensure_dir(g.out);
  write_text(g.out / ("check_" + name + ".json"), doc);
  std::cout << doc << '\n';
  return kExitOk;
}

int cmd_check_mean(const GlobalOptions& g, const CheckOptions& o) {
  std::vector<Index> grid;
  for (const double k : parse_number_list(o.m_multiples)) {
    grid.push_back(static_cast<Index>(std::llround(k * static_cast<double>(o.n))));
  }
  const auto report = check_mean_estimator(o.n, o.r, grid, o.trials, Rng(g.seed), g.threads);
  return emit_check(g, "mean", to_json(report));
}

int cmd_check_a1(const GlobalOptions& g, const CheckOptions& o) {
  const Index m = o.m ? *o.m
                      : static_cast<Index>(std::llround(
                            50.0 * o.n * std::log(static_cast<double>(o.n))));
  const Rng master(g.seed);
  ConcentrationReport report;
  report.n = o.n;
  report.m = m;
  report.r = o.r;
  report.trials = o.trials;
  report.statistic = "a1_deviation";
  for (int t = 0; t < o.trials; ++t) {
    Rng rng = master.split(static_cast<std::uint64_t>(t));
    VectorXd u = VectorXd::Zero(o.n);
    if (o.u == "e1") {
      u(0) = 1.0;
    } else if (o.u == "random") {
      for (Index i = 0; i < o.n; ++i) u(i) = rng.normal();
      u.normalize();
    } else {
      throw ConfigError("--u must be e1 or random");
    }
    report.deviations.push_back(check_a1(o.n, m, o.threshold, u, rng).deviation);
  }
  report.summarize();
  return emit_check(g, "a1", to_json(report));
}

int cmd_check_hessian(const GlobalOptions& g, const CheckOptions& o) {
  const Index m = o.m ? *o.m : 100000;
  Rng rng(g.seed);
  VectorXd x = VectorXd::Zero(o.n);
  x(0) = 1.0;
  VectorXd y = x;
  if (o.u == "orthogonal") {
    y = VectorXd::Zero(o.n);
    y(std::min<Index>(1, o.n - 1)) = 1.0;
  } else if (o.u != "e1") {
    throw ConfigError("--u must be e1 or orthogonal for the hessian check");
  }
  const HessianCheck check = check_hessian_expectation(x, y, m, rng);
  const json doc{{"statistic", "hessian_expectation"},
                 {"n", o.n},
                 {"m", m},
                 {"deviation", check.deviation},
                 {"trace", check.empirical_mean.trace()}};
  return emit_check(g, "hessian", doc.dump(2));
}

int cmd_check_regularity(const GlobalOptions& g, const CheckOptions& o) {
  const Index m = o.m ? *o.m
                      : static_cast<Index>(std::llround(
                            12.0 * o.n * std::log(static_cast<double>(o.n))));
  const Rng master(g.seed);
  ConcentrationReport report;
  report.n = o.n;
  report.m = m;
  report.r = o.r;
  report.trials = o.trials;
  report.statistic = "regularity_margin";
  int satisfied = 0;
  for (int t = 0; t < o.trials; ++t) {
    Rng rng = master.split(static_cast<std::uint64_t>(t));
    const Instance instance = generate_instance(o.n, o.r, m, EnsembleKind::kGoe, 0.0, rng);
    const auto& truth = *instance.truth;
    const double beta = o.beta ? *o.beta : 513.0 * truth.kappa * static_cast<double>(o.n);
    const double radius = std::sqrt(3.0 * truth.sigma(o.r - 1) / 16.0);
    Rng sample_rng = rng.split(7);
    for (int s = 0; s < o.samples; ++s) {
      const MatrixXd Z = sample_in_ball(truth.zstar, radius, sample_rng);
      const double margin = check_regularity(instance, Z, o.alpha, beta);
      if (margin >= 0.0) ++satisfied;
      // Deviations are nonnegative by contract: record the shortfall.
      report.deviations.push_back(std::max(0.0, -margin));
    }
  }
  report.summarize();
  json doc = json::parse(to_json(report));
  doc["fraction_satisfied"] =
      static_cast<double>(satisfied) / static_cast<double>(report.deviations.size());
  return emit_check(g, "regularity", doc.dump(2));
}

int cmd_check_rate(const GlobalOptions& g, const CheckOptions& o) {
  std::ifstream in(o.trace_path);
  if (!in) throw ConfigError("cannot open trace " + o.trace_path);
  const RateEstimate rate = estimate_rate(read_trace_csv(in));
  return emit_check(g, "rate", to_json(rate));
}

int cmd_sdp(const GlobalOptions& g, const std::string& problem_path,
            const std::string& method_name, Index rank, const SolverFlags& flags) {
  const SdpProblem problem = read_sdp_file(problem_path);
  SdpSolveConfig config;
  config.method = parse_sdp_method(method_name);
  config.rank = rank;
  MethodConfigs configs;
  if (auto file = load_config(g)) apply_method_sections(*file, configs);
  flags.apply(configs);
  config.gd = configs.gd;
  config.svp = configs.svp;
  config.svp.seed = g.seed;
  config.admm = configs.admm;

  const SdpSolution solution = solve_sdp(problem, config);
  ensure_dir(g.out);
  {
    auto out = open_out(g.out / "sdp_solution.csv");
    char buf[40];
    for (Index i = 0; i < solution.X_tilde.rows(); ++i) {
      for (Index j = 0; j < solution.X_tilde.cols(); ++j) {
        std::snprintf(buf, sizeof(buf), "%.17g", solution.X_tilde(i, j));
        out << (j ? "," : "") << buf;
      }
      out << '\n';
    }
  }
  {
    auto out = open_out(g.out / "trace.csv");
    write_trace_csv(out, solution.solve.trace);
  }
  json doc = result_json(solution.solve);
  doc["objective"] = number(solution.objective);
  write_text(g.out / "sdp_result.json", doc.dump(2));
  std::cout << doc.dump(2) << '\n';
  return solver_failed(solution.solve) ? kExitFailure : kExitOk;
}

}  // namespace

int cli_main(int argc, char** argv) {
  CLI::App app{"Low-rank PSD matrix recovery by factored gradient descent"};
  app.require_subcommand(1);
  app.fallthrough();

  GlobalOptions g;
  std::string out_dir = ".";
  auto* seed_opt = app.add_option("--seed", g.seed, "master random seed");
  app.add_option("--out", out_dir, "output directory");
  app.add_option("--config", g.config, "experiment config file")->check(CLI::ExistingFile);
  app.add_option("--threads", g.threads, "worker threads")->check(CLI::Range(1, 1024));

  // gen
  auto* gen = app.add_subcommand("gen", "generate a random instance directory");
  Index gen_n = 100, gen_r = 2;
  std::optional<Index> gen_m;
  std::optional<double> gen_ratio;
  std::string gen_kind = "goe";
  double gen_rho = 0.001;
  gen->add_option("--n", gen_n, "matrix dimension");
  gen->add_option("--r", gen_r, "rank");
  gen->add_option("--m", gen_m, "number of measurements");
  gen->add_option("--m-over-n", gen_ratio, "measurements as a multiple of n");
  gen->add_option("--ensemble", gen_kind, "goe or bernoulli");
  gen->add_option("--rho", gen_rho, "Bernoulli density");

  // solve
  auto* solve = app.add_subcommand("solve", "run one solver on an instance");
  std::string solve_method = "gd", solve_instance;
  std::optional<Index> solve_rank;
  SolverFlags solve_flags;
  solve->add_option("--method", solve_method, "gd, svp, admm, or altmin");
  solve->add_option("--instance", solve_instance, "instance directory")->required();
  solve->add_option("--rank", solve_rank, "target rank (default: planted rank)");
  solve_flags.add_to(solve);

  auto* phase = app.add_subcommand("phase", "phase-transition sweep from --config");

  auto* bench = app.add_subcommand("bench", "runtime comparison on one instance");
  std::string bench_scenario = "dense";
  std::optional<Index> bench_n;
  bench->add_option("--scenario", bench_scenario, "dense or sparse");
  bench->add_option("--n", bench_n, "override n, keeping m / n");

  auto* trace = app.add_subcommand("trace", "gd convergence trace and rate fit");
  std::optional<std::int64_t> trace_iters;
  trace->add_option("--max-iters", trace_iters, "iteration cap");

  auto* check = app.add_subcommand("check", "Monte-Carlo diagnostics");
  check->require_subcommand(1);
  CheckOptions co;
  auto add_common = [&](CLI::App* c) {
    c->add_option("--n", co.n, "dimension");
    c->add_option("--r", co.r, "rank");
    c->add_option("--m", co.m, "number of measurements");
    c->add_option("--trials", co.trials, "trials or instances");
  };
  auto* check_mean = check->add_subcommand("mean", "mean-estimator error against m");
  add_common(check_mean);
  check_mean->add_option("--m-multiples", co.m_multiples, "m grid as multiples of n");
  auto* check_a1_cmd = check->add_subcommand("a1", "concentration of the rank-one estimator");
  add_common(check_a1_cmd);
  check_a1_cmd->add_option("--u", co.u, "e1 or random");
  check_a1_cmd->add_option("--threshold", co.threshold, "deviation threshold");
  auto* check_hess = check->add_subcommand("hessian", "expectation of A x y^T A");
  add_common(check_hess);
  check_hess->add_option("--pair", co.u, "e1 (x = y) or orthogonal");
  auto* check_reg = check->add_subcommand("regularity", "regularity margin near Z*");
  add_common(check_reg);
  check_reg->add_option("--samples", co.samples, "points per instance");
  check_reg->add_option("--alpha", co.alpha, "curvature constant");
  check_reg->add_option("--beta", co.beta, "smoothness constant (default 513 kappa n)");
  auto* check_rate = check->add_subcommand("rate", "linear-rate fit of a trace CSV");
  check_rate->add_option("--trace", co.trace_path, "trace.csv")->required();

  auto* sdp = app.add_subcommand("sdp", "solve an SDP with positive definite cost");
  std::string sdp_problem, sdp_method = "gd";
  Index sdp_rank = 1;
  SolverFlags sdp_flags;
  sdp->add_option("--problem", sdp_problem, "SDP text file")->required();
  sdp->add_option("--method", sdp_method, "gd, svp, or admm");
  sdp->add_option("--rank", sdp_rank, "target rank for gd and svp");
  sdp_flags.add_to(sdp);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }
  g.seed_given = seed_opt->count() > 0;
  g.out = out_dir;

  try {
    if (*gen) return cmd_gen(g, gen_n, gen_r, gen_m, gen_ratio, gen_kind, gen_rho);
    if (*solve) return cmd_solve(g, solve_method, solve_instance, solve_rank, solve_flags);
    if (*phase) return cmd_phase(g);
    if (*bench) return cmd_bench(g, bench_scenario, bench_n);
    if (*trace) return cmd_trace(g, trace_iters);
    if (*check_mean) return cmd_check_mean(g, co);
    if (*check_a1_cmd) return cmd_check_a1(g, co);
    if (*check_hess) return cmd_check_hessian(g, co);
    if (*check_reg) return cmd_check_regularity(g, co);
    if (*check_rate) return cmd_check_rate(g, co);
    if (*sdp) return cmd_sdp(g, sdp_problem, sdp_method, sdp_rank, sdp_flags);
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const InvalidArgument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const ShapeError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "failure: " << e.what() << '\n';
    return kExitFailure;
  }
  return kExitUsage;
}

}  // namespace rankmin::cli
