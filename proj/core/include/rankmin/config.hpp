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


#pragma once

#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "rankmin/baselines.hpp"
#include "rankmin/gd.hpp"
#include "rankmin/measurement.hpp"

namespace rankmin {

enum class Method { kGd, kSvp, kAdmm, kAltMin };

std::string_view to_string(Method method);
Method parse_method(std::string_view name);

/// Per-solver settings. Ranks in svp/altmin are overwritten per grid cell.
struct MethodConfigs {
  GdConfig gd;
  SvpConfig svp;
  AdmmConfig admm;
  AltMinConfig altmin;
};

/// INI-style file: `[section]` headers, `key = value` lines, full-line
/// comments starting with ';' or '#'. Keys outside any section are rejected.
class ConfigFile {
 public:
  static ConfigFile parse(std::istream& in);
  static ConfigFile parse(std::string_view text);
  static ConfigFile load(const std::filesystem::path& path);

  bool has_section(const std::string& section) const;
  std::optional<std::string> get(const std::string& section, const std::string& key) const;
  /// Throws ConfigError when a section holds a key not in `allowed`.
  void require_known_keys(const std::string& section,
                          const std::vector<std::string>& allowed) const;

 private:
  std::map<std::string, std::map<std::string, std::string>> sections_;
};

/// Reads [gd], [svp], [admm], [altmin] over the given defaults.
void apply_method_sections(const ConfigFile& file, MethodConfigs& configs);

/// Phase-transition sweep: every (n, r, m) cell runs `trials` fresh instances
/// through each method.
struct ExperimentGrid {
  std::vector<Index> n_values{60};
  std::vector<Index> r_values{1};
  /// Measurement counts as multiples of n (rounded to the nearest integer)...
  std::vector<double> m_over_n;
  /// ...or as absolute counts. Exactly one of the two is nonempty.
  std::vector<Index> m_values;
  EnsembleKind kind = EnsembleKind::kGoe;
  double rho = 0.001;
  int trials = 40;
  std::uint64_t seed = 0;
  std::vector<Method> methods{Method::kGd};
  MethodConfigs configs;

  std::vector<Index> measurements_for(Index n) const;
  void validate() const;
};

/// [grid] section plus method sections.
ExperimentGrid grid_from_config(const ConfigFile& file);

/// Same-instance runtime comparison.
struct BenchConfig {
  Index n = 400;
  Index r = 2;
  Index m = 2400;
  EnsembleKind kind = EnsembleKind::kGoe;
  double rho = 0.001;
  std::uint64_t seed = 0;
  std::vector<Method> methods{Method::kGd, Method::kSvp, Method::kAdmm};
  MethodConfigs configs;
  double target = 1e-5;

  /// n = 400, r = 2, m = 6n, GOE; mu 0.8, SVP step 1e-4.
  static BenchConfig dense_scenario();
  /// n = 600, r = 2, m = 7n, Bernoulli rho = 0.001; mu 1.0, SVP step 1e-3.
  static BenchConfig sparse_scenario();
  void validate() const;
};

/// [bench] section (scenario = dense | sparse picks the base) plus method
/// sections.
BenchConfig bench_from_config(const ConfigFile& file);

struct TraceConfig {
  Index n = 200;
  Index r = 2;
  Index m = 1000;
  EnsembleKind kind = EnsembleKind::kGoe;
  double rho = 0.001;
  std::uint64_t seed = 0;
  /// Step inside the stable range for rank-2 GOE instances; the tolerance is
  /// tight enough for the trace to reach the asymptotic regime.
  GdConfig gd{.mu = 0.6, .rel_err_tol = 1e-12};

  void validate() const;
};

/// [trace] section plus [gd].
TraceConfig trace_from_config(const ConfigFile& file);

/// Parses "a, b, c" lists and "start:stop:step" inclusive ranges.
std::vector<double> parse_number_list(std::string_view text);

}  // namespace rankmin
