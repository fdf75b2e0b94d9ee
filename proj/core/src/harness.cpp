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

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <istream>
#include <json.hpp>
#include <map>
#include <mutex>
#include <ostream>
#include <sstream>
#include <tuple>

#include "parallel.hpp"
#include "rankmin/error.hpp"

namespace rankmin {

namespace {

std::string fmt_double(double v) {
  if (std::isnan(v)) return "nan";
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

double parse_double(const std::string& field) {
  if (field == "nan") return kNaN;
  std::size_t used = 0;
  const double v = std::stod(field, &used);
  if (used != field.size()) throw ConfigError("bad number '" + field + "' in CSV");
  return v;
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string field;
  while (std::getline(ss, field, ',')) out.push_back(field);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

void expect_header(std::istream& in, const std::string& header) {
  std::string line;
  if (!std::getline(in, line)) throw ConfigError("CSV is empty");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != header) throw ConfigError("unexpected CSV header '" + line + "'");
}

struct TrialOutcome {
  bool success = false;
  std::string reason;
};

}  // namespace

SolveResult run_method(Method method, const Instance& instance, Index r,
                       const MethodConfigs& configs) {
  switch (method) {
    case Method::kGd:
      return solve_gd(instance, r, configs.gd);
    case Method::kSvp: {
      SvpConfig c = configs.svp;
      c.r = r;
      return solve_svp(instance, c);
    }
    case Method::kAdmm:
      return solve_nuclear_admm(instance, configs.admm);
    case Method::kAltMin: {
      AltMinConfig c = configs.altmin;
      c.r = r;
      return solve_altmin(instance, c);
    }
  }
  throw InvalidArgument("unknown method");
}

std::vector<PhaseCell> run_phase_transition(const ExperimentGrid& grid, int threads,
                                            const ProgressFn& progress) {
  grid.validate();
  struct CellKey {
    Index n, r, m;
  };
  std::vector<CellKey> keys;
  for (const Index n : grid.n_values) {
    for (const Index r : grid.r_values) {
      for (const Index m : grid.measurements_for(n)) keys.push_back({n, r, m});
    }
  }
  const std::int64_t trials = grid.trials;
  const std::int64_t total = static_cast<std::int64_t>(keys.size()) * trials;
  const std::size_t methods = grid.methods.size();
  std::vector<std::vector<TrialOutcome>> outcomes(static_cast<std::size_t>(total));

  const Rng master(grid.seed);
  std::mutex progress_mutex;
  std::int64_t done = 0;
  detail::parallel_for(total, threads, [&](std::int64_t task) {
    const CellKey& key = keys[static_cast<std::size_t>(task / trials)];
    const std::int64_t trial = task % trials;
    Rng rng = master.split({static_cast<std::uint64_t>(key.n), static_cast<std::uint64_t>(key.r),
                            static_cast<std::uint64_t>(key.m),
                            static_cast<std::uint64_t>(trial)});
    auto& row = outcomes[static_cast<std::size_t>(task)];
    row.resize(methods);
    std::optional<Instance> instance;
    try {
      instance = generate_instance(key.n, key.r, key.m, grid.kind, grid.rho, rng);
    } catch (const std::exception& e) {
      for (auto& o : row) o.reason = std::string("instance generation failed: ") + e.what();
    }
    if (instance) {
      MethodConfigs configs = grid.configs;
      configs.svp.seed = rng.split(3).seed();
      for (std::size_t k = 0; k < methods; ++k) {
        try {
          const SolveResult res = run_method(grid.methods[k], *instance, key.r, configs);
          row[k].success = res.final_rel_err < kRecoveryTolerance;
          if (!row[k].success) {
            row[k].reason = std::string(to_string(res.termination)) +
                            ", rel_err " + fmt_double(res.final_rel_err);
          }
        } catch (const std::exception& e) {
          row[k].reason = e.what();
        }
      }
    }
    if (progress) {
      std::lock_guard lock(progress_mutex);
      progress(++done, total);
    }
  });

  std::vector<PhaseCell> cells;
  for (std::size_t c = 0; c < keys.size(); ++c) {
    for (std::size_t k = 0; k < methods; ++k) {
      PhaseCell cell;
      cell.method = grid.methods[k];
      cell.n = keys[c].n;
      cell.r = keys[c].r;
      cell.m = keys[c].m;
      cell.trials = grid.trials;
      for (std::int64_t t = 0; t < trials; ++t) {
        const auto& o = outcomes[c * static_cast<std::size_t>(trials) + t][k];
        if (o.success) {
          ++cell.successes;
        } else {
          cell.failures.push_back("trial " + std::to_string(t) + ": " + o.reason);
        }
      }
      cell.probability = static_cast<double>(cell.successes) / cell.trials;
      cells.push_back(std::move(cell));
    }
  }
  return cells;
}

void write_phase_csv(std::ostream& out, const std::vector<PhaseCell>& cells) {
  out << "method,n,r,m,successes,trials,probability\n";
  for (const auto& c : cells) {
    out << to_string(c.method) << ',' << c.n << ',' << c.r << ',' << c.m << ','
        << c.successes << ',' << c.trials << ',' << fmt_double(c.probability) << '\n';
  }
}

std::vector<PhaseCell> read_phase_csv(std::istream& in) {
  expect_header(in, "method,n,r,m,successes,trials,probability");
  std::vector<PhaseCell> cells;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto f = split_csv_line(line);
    if (f.size() != 7) throw ConfigError("phase CSV row needs 7 fields: " + line);
    PhaseCell c;
    try {
      c.method = parse_method(f[0]);
      c.n = std::stol(f[1]);
      c.r = std::stol(f[2]);
      c.m = std::stol(f[3]);
      c.successes = std::stoi(f[4]);
      c.trials = std::stoi(f[5]);
      c.probability = parse_double(f[6]);
    } catch (const std::logic_error&) {
      throw ConfigError("bad phase CSV row: " + line);
    }
    if (c.successes < 0 || c.successes > c.trials) {
      throw ConfigError("successes outside [0, trials]: " + line);
    }
    cells.push_back(std::move(c));
  }
  return cells;
}

std::optional<double> phase_crossing(const std::vector<PhaseCell>& cells, Method method,
                                     Index n, Index r) {
  std::vector<const PhaseCell*> curve;
  for (const auto& c : cells) {
    if (c.method == method && c.n == n && c.r == r) curve.push_back(&c);
  }
  std::sort(curve.begin(), curve.end(),
            [](const PhaseCell* a, const PhaseCell* b) { return a->m < b->m; });
  for (std::size_t j = 0; j < curve.size(); ++j) {
    if (curve[j]->probability < 0.5) continue;
    if (j == 0) return static_cast<double>(curve[0]->m);
    const double p0 = curve[j - 1]->probability;
    const double p1 = curve[j]->probability;
    const double m0 = static_cast<double>(curve[j - 1]->m);
    const double m1 = static_cast<double>(curve[j]->m);
    return m0 + (0.5 - p0) / (p1 - p0) * (m1 - m0);
  }
  return std::nullopt;
}

double isotonic_violation(const std::vector<double>& values) {
  // Blocks of (mean, weight) merged while they violate monotonicity.
  std::vector<std::pair<double, double>> blocks;
  for (const double v : values) {
    blocks.emplace_back(v, 1.0);
    while (blocks.size() > 1 && blocks[blocks.size() - 2].first > blocks.back().first) {
      const auto [m2, w2] = blocks.back();
      blocks.pop_back();
      auto& [m1, w1] = blocks.back();
      m1 = (m1 * w1 + m2 * w2) / (w1 + w2);
      w1 += w2;
    }
  }
  double worst = 0.0;
  std::size_t i = 0;
  for (const auto& [mean, weight] : blocks) {
    for (int k = 0; k < static_cast<int>(weight); ++k, ++i) {
      worst = std::max(worst, std::abs(values[i] - mean));
    }
  }
  return worst;
}

BenchReport run_runtime_bench(const BenchConfig& config) {
  config.validate();
  Rng rng(config.seed);
  const Instance instance =
      generate_instance(config.n, config.r, config.m, config.kind, config.rho, rng);
  MethodConfigs configs = config.configs;
  configs.svp.seed = rng.split(3).seed();

  BenchReport report;
  report.config = config;
  for (const Method method : config.methods) {
    BenchCurve curve;
    curve.method = method;
    try {
      curve.result = run_method(method, instance, config.r, configs);
      for (const auto& row : curve.result.trace) {
        if (std::isnan(row.rel_err)) continue;
        if (std::isnan(curve.best_rel_err) || row.rel_err < curve.best_rel_err) {
          curve.best_rel_err = row.rel_err;
        }
        if (!curve.time_to_target && row.rel_err < config.target) {
          curve.time_to_target = row.seconds;
        }
      }
    } catch (const std::exception& e) {
      curve.error = e.what();
    }
    report.curves.push_back(std::move(curve));
  }
  return report;
}

void write_bench_csv(std::ostream& out, const BenchReport& report) {
  out << "method,seconds,rel_err\n";
  for (const auto& curve : report.curves) {
    for (const auto& row : curve.result.trace) {
      out << to_string(curve.method) << ',' << fmt_double(row.seconds) << ','
          << fmt_double(row.rel_err) << '\n';
    }
  }
}

std::vector<BenchRow> read_bench_csv(std::istream& in) {
  expect_header(in, "method,seconds,rel_err");
  std::vector<BenchRow> rows;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto f = split_csv_line(line);
    if (f.size() != 3) throw ConfigError("bench CSV row needs 3 fields: " + line);
    try {
      rows.push_back(BenchRow{f[0], parse_double(f[1]), parse_double(f[2])});
    } catch (const std::logic_error&) {
      throw ConfigError("bad bench CSV row: " + line);
    }
  }
  return rows;
}

std::string bench_summary_json(const BenchReport& report) {
  using nlohmann::json;
  const auto num = [](double v) { return std::isfinite(v) ? json(v) : json(nullptr); };
  json methods = json::array();
  for (const auto& c : report.curves) {
    json entry{{"method", to_string(c.method)},
               {"time_to_target", c.time_to_target ? json(*c.time_to_target) : json(nullptr)},
               {"best_rel_err", num(c.best_rel_err)},
               {"termination", to_string(c.result.termination)},
               {"iterations", c.result.iterations}};
    if (!c.error.empty()) entry["error"] = c.error;
    methods.push_back(std::move(entry));
  }
  const auto& cfg = report.config;
  return json{{"n", cfg.n},
              {"r", cfg.r},
              {"m", cfg.m},
              {"ensemble", to_string(cfg.kind)},
              {"rho", cfg.rho},
              {"seed", cfg.seed},
              {"target", cfg.target},
              {"methods", methods}}
      .dump(2);
}

TraceReport run_convergence_trace(const TraceConfig& config) {
  config.validate();
  Rng rng(config.seed);
  const Instance instance =
      generate_instance(config.n, config.r, config.m, config.kind, config.rho, rng);
  TraceReport report;
  report.result = solve_gd(instance, config.r, config.gd);
  try {
    report.rate = estimate_rate(report.result.trace);
  } catch (const InsufficientData& e) {
    report.rate_error = e.what();
  }
  return report;
}

std::string to_json(const TraceReport& report) {
  using nlohmann::json;
  const auto num = [](double v) { return std::isfinite(v) ? json(v) : json(nullptr); };
  json doc{{"termination", to_string(report.result.termination)},
           {"iterations", report.result.iterations},
           {"final_rel_err", num(report.result.final_rel_err)}};
  if (report.rate) {
    doc["slope"] = report.rate->slope;
    doc["r_squared"] = report.rate->r_squared;
    doc["degenerate"] = report.rate->degenerate;
    doc["points"] = report.rate->points;
  } else {
    doc["rate_error"] = report.rate_error;
  }
  return doc.dump(2);
}

}  // namespace rankmin
