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


#include "rankmin/diagnostics.hpp"

#include <Eigen/QR>
#include <algorithm>
#include <cmath>
#include <json.hpp>

#include "parallel.hpp"
#include "rankmin/error.hpp"
#include "rankmin/gd.hpp"
#include "rankmin/linalg.hpp"

namespace rankmin {

namespace {

using nlohmann::json;

double median_of(std::vector<double> v) {
  if (v.empty()) return 0.0;
  const std::size_t mid = v.size() / 2;
  std::nth_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(mid), v.end());
  const double upper = v[mid];
  if (v.size() % 2 == 1) return upper;
  const double lower =
      *std::max_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(mid));
  return 0.5 * (lower + upper);
}

struct LineFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r_squared = 0.0;
  bool degenerate = false;
};

LineFit fit_line(const std::vector<double>& x, const std::vector<double>& y) {
  const double k = static_cast<double>(x.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= k;
  my /= k;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
    syy += (y[i] - my) * (y[i] - my);
  }
  LineFit fit;
  if (!(sxx > 0.0)) throw InsufficientData("fit needs at least two distinct abscissae");
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  if (!(syy > 0.0)) {
    fit.degenerate = true;
    fit.slope = 0.0;
    return fit;
  }
  double ss_res = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double e = y[i] - (fit.intercept + fit.slope * x[i]);
    ss_res += e * e;
  }
  fit.r_squared = 1.0 - ss_res / syy;
  return fit;
}

json report_fields(const ConcentrationReport& r) {
  return json{{"n", r.n},           {"m", r.m},
              {"r", r.r},           {"trials", r.trials},
              {"statistic", r.statistic}, {"deviations", r.deviations},
              {"median", r.median}, {"max", r.max}};
}

}  // namespace

void ConcentrationReport::summarize() {
  median = median_of(deviations);
  max = deviations.empty() ? 0.0 : *std::max_element(deviations.begin(), deviations.end());
}

std::string to_json(const ConcentrationReport& report) {
  return report_fields(report).dump(2);
}

std::string to_json(const MeanEstimatorReport& report) {
  json per_m = json::array();
  for (const auto& r : report.per_m) per_m.push_back(report_fields(r));
  const json doc{{"statistic", "mean_estimator_rel_err"},
                 {"n", report.n},
                 {"r", report.r},
                 {"trials", report.trials},
                 {"m_grid", report.m_grid},
                 {"mean_errors", report.mean_errors},
                 {"slope", report.slope},
                 {"per_m", per_m}};
  return doc.dump(2);
}

double mean_estimator_error(const MatrixXd& M, const MatrixXd& xstar) {
  if (M.rows() != xstar.rows() || M.cols() != xstar.cols()) throw ShapeError("shape mismatch");
  const double scale = xstar.norm();
  if (!(scale > 0.0)) throw InvalidArgument("X* must be nonzero");
  return (0.5 * M - xstar).norm() / scale;
}

MeanEstimatorReport check_mean_estimator(Index n, Index r, const std::vector<Index>& m_grid,
                                         int trials, const Rng& rng, int threads) {
  if (m_grid.empty()) throw InvalidArgument("m grid must be nonempty");
  if (trials < 1) throw InvalidArgument("need at least one trial");
  MeanEstimatorReport out;
  out.n = n;
  out.r = r;
  out.trials = trials;
  out.m_grid = m_grid;

  for (const Index m : m_grid) {
    ConcentrationReport report;
    report.n = n;
    report.m = m;
    report.r = r;
    report.trials = trials;
    report.statistic = "mean_estimator_rel_err";
    report.deviations.assign(static_cast<std::size_t>(trials), 0.0);
    detail::parallel_for(trials, threads, [&](std::int64_t t) {
      Rng trial_rng = rng.split({static_cast<std::uint64_t>(m), static_cast<std::uint64_t>(t)});
      const Instance instance =
          generate_instance(n, r, m, EnsembleKind::kGoe, 0.0, trial_rng);
      report.deviations[static_cast<std::size_t>(t)] =
          mean_estimator_error(spectral_matrix(instance), instance.truth->xstar());
    });
    report.summarize();
    double mean = 0.0;
    for (const double e : report.deviations) mean += e;
    out.mean_errors.push_back(mean / trials);
    out.per_m.push_back(std::move(report));
  }

  if (m_grid.size() >= 2) {
    std::vector<double> lx, ly;
    for (std::size_t i = 0; i < m_grid.size(); ++i) {
      lx.push_back(std::log(static_cast<double>(m_grid[i])));
      ly.push_back(std::log(out.mean_errors[i]));
    }
    out.slope = fit_line(lx, ly).slope;
  }
  return out;
}

A1Check check_a1(Index n, Index m, double delta_over_r, const VectorXd& u, Rng& rng) {
  if (u.size() != n) throw ShapeError("u must have length n");
  if (m < 1) throw InvalidArgument("need at least one draw");
  MatrixXd sum = MatrixXd::Zero(n, n);
  for (Index i = 0; i < m; ++i) {
    const MatrixXd A = sample_goe(n, rng);
    sum.noalias() += u.dot(A * u) * A;
  }
  const MatrixXd deviation = sum / static_cast<double>(m) - 2.0 * u * u.transpose();
  return A1Check{operator_norm(0.5 * (deviation + deviation.transpose())), delta_over_r};
}

HessianCheck check_hessian_expectation(const VectorXd& x, const VectorXd& y, Index m,
                                       Rng& rng) {
  if (x.size() != y.size()) throw ShapeError("x and y must have equal length");
  if (m < 1) throw InvalidArgument("need at least one draw");
  const Index n = x.size();
  HessianCheck out;
  out.empirical_mean = MatrixXd::Zero(n, n);
  for (Index i = 0; i < m; ++i) {
    const MatrixXd A = sample_goe(n, rng);
    // A x y^T A = (A x)(A y)^T for symmetric A.
    out.empirical_mean.noalias() += (A * x) * (A * y).transpose();
  }
  out.empirical_mean /= static_cast<double>(m);
  MatrixXd expected = y * x.transpose();
  expected.diagonal().array() += x.dot(y);
  out.deviation = operator_norm(out.empirical_mean - expected);
  return out;
}

double check_regularity(const Instance& instance, const MatrixXd& Z, double alpha,
                        double beta) {
  if (!instance.truth) throw ConfigError("regularity check needs a planted solution");
  if (!(alpha > 0.0) || !(beta > 0.0)) throw InvalidArgument("alpha and beta must be positive");
  const GroundTruth& truth = *instance.truth;
  if (Z.rows() != truth.zstar.rows() || Z.cols() != truth.zstar.cols()) {
    throw ShapeError("Z must match the shape of Z*");
  }
  const AlignmentResult aligned = procrustes_align(Z, truth.zstar);
  const MatrixXd H = Z - truth.zstar * aligned.rotation;
  const MatrixXd grad = gradient(Z, instance);
  const double sigma_r = truth.sigma(truth.rank() - 1);
  const double lhs = (grad.array() * H.array()).sum();
  const double rhs = sigma_r * H.squaredNorm() / alpha +
                     grad.squaredNorm() / (beta * truth.zstar.squaredNorm());
  return lhs - rhs;
}

MatrixXd random_orthonormal(Index r, Rng& rng) {
  MatrixXd G(r, r);
  for (Index j = 0; j < r; ++j) {
    for (Index i = 0; i < r; ++i) G(i, j) = rng.normal();
  }
  const Eigen::HouseholderQR<MatrixXd> qr(G);
  MatrixXd Q = qr.householderQ();
  const MatrixXd& R = qr.matrixQR();
  for (Index j = 0; j < r; ++j) {
    if (R(j, j) < 0.0) Q.col(j) *= -1.0;
  }
  return Q;
}

MatrixXd sample_in_ball(const MatrixXd& zstar, double radius, Rng& rng) {
  if (!(radius >= 0.0)) throw InvalidArgument("radius must be nonnegative");
  MatrixXd H(zstar.rows(), zstar.cols());
  for (Index j = 0; j < H.cols(); ++j) {
    for (Index i = 0; i < H.rows(); ++i) H(i, j) = rng.normal();
  }
  const double scale = radius * rng.uniform() / H.norm();
  return zstar * random_orthonormal(zstar.cols(), rng) + scale * H;
}

RateEstimate estimate_rate(const std::vector<TraceRecord>& trace) {
  std::vector<const TraceRecord*> usable;
  for (const auto& row : trace) {
    if (std::isfinite(row.dist) && row.dist > 0.0) usable.push_back(&row);
  }
  if (usable.size() < 20) {
    throw InsufficientData("rate fit needs at least 20 rows with positive distance, got " +
                           std::to_string(usable.size()));
  }
  const std::size_t trim = usable.size() / 10;
  std::vector<double> x, y;
  for (std::size_t i = trim; i < usable.size() - trim; ++i) {
    x.push_back(static_cast<double>(usable[i]->iter));
    y.push_back(std::log10(usable[i]->dist));
  }
  const LineFit fit = fit_line(x, y);
  return RateEstimate{fit.slope, fit.r_squared, fit.degenerate,
                      static_cast<std::int64_t>(x.size())};
}

std::string to_json(const RateEstimate& rate) {
  return json{{"slope", rate.slope},
              {"r_squared", rate.r_squared},
              {"degenerate", rate.degenerate},
              {"points", rate.points}}
      .dump(2);
}

double ks_statistic(std::vector<double> a, std::vector<double> b) {
  if (a.empty() || b.empty()) throw InvalidArgument("KS statistic needs two nonempty samples");
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  const double na = static_cast<double>(a.size());
  const double nb = static_cast<double>(b.size());
  std::size_t i = 0, j = 0;
  double d = 0.0;
  while (i < a.size() && j < b.size()) {
    const double v = std::min(a[i], b[j]);
    while (i < a.size() && a[i] == v) ++i;
    while (j < b.size() && b[j] == v) ++j;
    d = std::max(d, std::abs(i / na - j / nb));
  }
  return d;
}

}  // namespace rankmin
