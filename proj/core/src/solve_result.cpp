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

#include "rankmin/solve_result.hpp"

#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>

#include "rankmin/error.hpp"
#include "rankmin/linalg.hpp"

namespace rankmin {

std::string_view to_string(Termination t) {
  switch (t) {
    case Termination::kConverged:
      return "converged";
    case Termination::kMaxIters:
      return "max-iters";
    case Termination::kStalled:
      return "stalled";
    case Termination::kDiverged:
      return "diverged";
    case Termination::kIllConditioned:
      return "ill-conditioned";
  }
  return "unknown";
}

namespace {

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

double parse_double(const std::string& field) {
  if (field == "nan") return kNaN;
  if (field == "inf") return std::numeric_limits<double>::infinity();
  if (field == "-inf") return -std::numeric_limits<double>::infinity();
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(field, &used);
  } catch (const std::exception&) {
    throw ConfigError("bad numeric field '" + field + "' in trace CSV");
  }
  if (used != field.size()) throw ConfigError("bad numeric field '" + field + "'");
  return v;
}

}  // namespace

void write_trace_csv(std::ostream& out, const std::vector<TraceRecord>& trace) {
  out << "iter,f,rel_err,dist,seconds\n";
  for (const auto& t : trace) {
    out << t.iter << ',' << format_double(t.f) << ',' << format_double(t.rel_err)
        << ',' << format_double(t.dist) << ',' << format_double(t.seconds) << '\n';
  }
}

std::vector<TraceRecord> read_trace_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line != "iter,f,rel_err,dist,seconds") {
    throw ConfigError("trace CSV must start with header iter,f,rel_err,dist,seconds");
  }
  std::vector<TraceRecord> trace;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::stringstream ss(line);
    std::string field;
    std::vector<std::string> fields;
    while (std::getline(ss, field, ',')) fields.push_back(field);
    if (fields.size() != 5) throw ConfigError("trace CSV row needs 5 fields: " + line);
    TraceRecord t;
    t.iter = std::stoll(fields[0]);
    t.f = parse_double(fields[1]);
    t.rel_err = parse_double(fields[2]);
    t.dist = parse_double(fields[3]);
    t.seconds = parse_double(fields[4]);
    trace.push_back(t);
  }
  return trace;
}

TruthMetrics::TruthMetrics(const Instance& instance) {
  if (!instance.truth) return;
  has_truth_ = true;
  zstar_ = instance.truth->zstar;
  xstar_ = zstar_ * zstar_.transpose();
  xstar_norm_ = xstar_.norm();
}

double TruthMetrics::rel_err_factored(const MatrixXd& Z) const {
  if (!has_truth_) return kNaN;
  // Form the n x n difference directly; the Gram-matrix shortcut loses about
  // half the significant digits to cancellation near convergence.
  MatrixXd D = -xstar_;
  D.noalias() += Z * Z.transpose();
  return D.norm() / xstar_norm_;
}

double TruthMetrics::rel_err(const MatrixXd& X) const {
  if (!has_truth_) return kNaN;
  return (X - xstar_).norm() / xstar_norm_;
}

double TruthMetrics::distance(const MatrixXd& Z) const {
  if (!has_truth_ || Z.cols() != zstar_.cols()) return kNaN;
  return procrustes_align(Z, zstar_).distance;
}

double relative_residual(const VectorXd& measured, const VectorXd& b) {
  const double bn = b.norm();
  const double rn = (measured - b).norm();
  return bn > 0.0 ? rn / bn : rn;
}

TraceRecorder::TraceRecorder() : start_(std::chrono::steady_clock::now()) {}

double TraceRecorder::elapsed() const {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_)
      .count();
}

void TraceRecorder::record(std::int64_t iter, double f, double rel_err,
                           double dist, bool force) {
  const bool keep = iter <= kDenseLimit || iter % kSparseStride == 0;
  if (!keep && !force) return;
  if (!trace_.empty() && trace_.back().iter == iter) return;
  trace_.push_back({iter, f, rel_err, dist, elapsed()});
}

ProgressMonitor::ProgressMonitor(double stall_tol, std::int64_t window)
    : stall_tol_(stall_tol), window_(window) {}

std::optional<Termination> ProgressMonitor::update(double f) {
  if (!std::isfinite(f)) return Termination::kDiverged;
  if (!initial_) initial_ = f;
  if (f > 1e6 * *initial_ && f > 0.0) return Termination::kDiverged;
  best_ = std::min(best_, f);
  best_history_.push_back(best_);
  if (static_cast<std::int64_t>(best_history_.size()) > window_) {
    const double old = best_history_.front();
    best_history_.pop_front();
    if (old - best_ < stall_tol_) return Termination::kStalled;
  }
  return std::nullopt;
}

void ProgressMonitor::reset_stall_window() { best_history_.clear(); }

}  // namespace rankmin
