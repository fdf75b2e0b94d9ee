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


#include "rankmin/config.hpp"

#include <algorithm>
#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "rankmin/error.hpp"

namespace rankmin {

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

std::vector<std::string_view> split_commas(std::string_view text) {
  std::vector<std::string_view> out;
  while (true) {
    const auto comma = text.find(',');
    out.push_back(trim(text.substr(0, comma)));
    if (comma == std::string_view::npos) break;
    text.remove_prefix(comma + 1);
  }
  return out;
}

double to_double(std::string_view text, std::string_view what) {
  text = trim(text);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || ptr != text.data() + text.size() || !std::isfinite(v)) {
    throw ConfigError(std::string(what) + ": '" + std::string(text) + "' is not a number");
  }
  return v;
}

std::int64_t to_int(std::string_view text, std::string_view what) {
  text = trim(text);
  std::int64_t v = 0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || ptr != text.data() + text.size()) {
    throw ConfigError(std::string(what) + ": '" + std::string(text) + "' is not an integer");
  }
  return v;
}

std::uint64_t to_u64(std::string_view text, std::string_view what) {
  text = trim(text);
  std::uint64_t v = 0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || ptr != text.data() + text.size()) {
    throw ConfigError(std::string(what) + ": '" + std::string(text) +
                      "' is not an unsigned integer");
  }
  return v;
}

std::vector<Index> to_index_list(std::string_view text, std::string_view what) {
  std::vector<Index> out;
  for (const double v : parse_number_list(text)) {
    if (v != std::round(v)) throw ConfigError(std::string(what) + " must hold integers");
    out.push_back(static_cast<Index>(v));
  }
  return out;
}

// Reads `key` from `section` into `target` if present.
template <typename T, typename Conv>
void read_key(const ConfigFile& file, const std::string& section, const std::string& key,
              T& target, Conv conv) {
  if (auto v = file.get(section, key)) target = conv(*v, section + "." + key);
}

// Wraps ConfigError around validation failures so the CLI reports them as
// usage problems.
template <typename Cfg>
void validate_as_config(const Cfg& cfg, const std::string& section) {
  try {
    cfg.validate();
  } catch (const InvalidArgument& e) {
    throw ConfigError("[" + section + "] " + e.what());
  }
}

}  // namespace

std::string_view to_string(Method method) {
  switch (method) {
    case Method::kGd: return "gd";
    case Method::kSvp: return "svp";
    case Method::kAdmm: return "admm";
    case Method::kAltMin: return "altmin";
  }
  return "unknown";
}

Method parse_method(std::string_view name) {
  name = trim(name);
  if (name == "gd") return Method::kGd;
  if (name == "svp") return Method::kSvp;
  if (name == "admm") return Method::kAdmm;
  if (name == "altmin") return Method::kAltMin;
  throw ConfigError("unknown method '" + std::string(name) + "'");
}

std::vector<double> parse_number_list(std::string_view text) {
  text = trim(text);
  if (text.empty()) throw ConfigError("empty number list");
  if (text.find(':') != std::string_view::npos) {
    std::vector<double> parts;
    std::string_view rest = text;
    while (true) {
      const auto colon = rest.find(':');
      parts.push_back(to_double(rest.substr(0, colon), "range"));
      if (colon == std::string_view::npos) break;
      rest.remove_prefix(colon + 1);
    }
    if (parts.size() != 3 || !(parts[2] > 0.0) || parts[1] < parts[0]) {
      throw ConfigError("range must be start:stop:step with step > 0 and stop >= start");
    }
    const auto count =
        static_cast<std::int64_t>(std::floor((parts[1] - parts[0]) / parts[2] + 1e-9)) + 1;
    std::vector<double> out;
    for (std::int64_t i = 0; i < count; ++i) out.push_back(parts[0] + i * parts[2]);
    return out;
  }
  std::vector<double> out;
  for (auto item : split_commas(text)) out.push_back(to_double(item, "list"));
  return out;
}

ConfigFile ConfigFile::parse(std::istream& in) {
  // boost's INI reader only knows ';' comments.
  std::ostringstream cleaned;
  std::string line;
  while (std::getline(in, line)) {
    const auto body = trim(line);
    cleaned << (!body.empty() && body.front() == '#' ? std::string(";") : line) << '\n';
  }
  boost::property_tree::ptree tree;
  std::istringstream source(cleaned.str());
  try {
    boost::property_tree::ini_parser::read_ini(source, tree);
  } catch (const boost::property_tree::ini_parser_error& e) {
    throw ConfigError(std::string("config parse error: ") + e.what());
  }
  ConfigFile out;
  for (const auto& [section, body] : tree) {
    if (body.empty()) throw ConfigError("key '" + section + "' is outside any section");
    auto& target = out.sections_[section];
    for (const auto& [key, value] : body) target[key] = value.get_value<std::string>();
  }
  return out;
}

ConfigFile ConfigFile::parse(std::string_view text) {
  std::istringstream in{std::string(text)};
  return parse(in);
}

ConfigFile ConfigFile::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path.string());
  return parse(in);
}

bool ConfigFile::has_section(const std::string& section) const {
  return sections_.contains(section);
}

std::optional<std::string> ConfigFile::get(const std::string& section,
                                           const std::string& key) const {
  const auto s = sections_.find(section);
  if (s == sections_.end()) return std::nullopt;
  const auto k = s->second.find(key);
  if (k == s->second.end()) return std::nullopt;
  return k->second;
}

void ConfigFile::require_known_keys(const std::string& section,
                                    const std::vector<std::string>& allowed) const {
  const auto s = sections_.find(section);
  if (s == sections_.end()) return;
  for (const auto& [key, value] : s->second) {
    if (std::find(allowed.begin(), allowed.end(), key) == allowed.end()) {
      throw ConfigError("unknown key '" + key + "' in [" + section + "]");
    }
  }
}

void apply_method_sections(const ConfigFile& file, MethodConfigs& configs) {
  const auto d = [](const std::string& v, const std::string& w) { return to_double(v, w); };
  const auto i = [](const std::string& v, const std::string& w) { return to_int(v, w); };
  const auto u = [](const std::string& v, const std::string& w) { return to_u64(v, w); };

  file.require_known_keys("gd", {"mu", "max_iters", "rel_err_tol", "stall_tol"});
  read_key(file, "gd", "mu", configs.gd.mu, d);
  read_key(file, "gd", "max_iters", configs.gd.max_iters, i);
  read_key(file, "gd", "rel_err_tol", configs.gd.rel_err_tol, d);
  read_key(file, "gd", "stall_tol", configs.gd.stall_tol, d);
  validate_as_config(configs.gd, "gd");

  file.require_known_keys("svp", {"step", "max_iters", "rel_err_tol", "stall_tol", "seed"});
  read_key(file, "svp", "step", configs.svp.step, d);
  read_key(file, "svp", "max_iters", configs.svp.max_iters, i);
  read_key(file, "svp", "rel_err_tol", configs.svp.rel_err_tol, d);
  read_key(file, "svp", "stall_tol", configs.svp.stall_tol, d);
  read_key(file, "svp", "seed", configs.svp.seed, u);
  validate_as_config(configs.svp, "svp");

  file.require_known_keys("admm", {"lambda", "eta", "max_iters", "rel_err_tol", "stall_tol",
                                   "max_measurements"});
  read_key(file, "admm", "lambda", configs.admm.lambda, d);
  read_key(file, "admm", "eta", configs.admm.eta, d);
  read_key(file, "admm", "max_iters", configs.admm.max_iters, i);
  read_key(file, "admm", "rel_err_tol", configs.admm.rel_err_tol, d);
  read_key(file, "admm", "stall_tol", configs.admm.stall_tol, d);
  read_key(file, "admm", "max_measurements", configs.admm.max_measurements, i);
  validate_as_config(configs.admm, "admm");

  file.require_known_keys("altmin",
                          {"max_iters", "rel_err_tol", "stall_tol", "ls_regularization"});
  read_key(file, "altmin", "max_iters", configs.altmin.max_iters, i);
  read_key(file, "altmin", "rel_err_tol", configs.altmin.rel_err_tol, d);
  read_key(file, "altmin", "stall_tol", configs.altmin.stall_tol, d);
  read_key(file, "altmin", "ls_regularization", configs.altmin.ls_regularization, d);
  validate_as_config(configs.altmin, "altmin");
}

std::vector<Index> ExperimentGrid::measurements_for(Index n) const {
  if (!m_values.empty()) return m_values;
  std::vector<Index> out;
  for (const double k : m_over_n) {
    out.push_back(static_cast<Index>(std::llround(k * static_cast<double>(n))));
  }
  return out;
}

void ExperimentGrid::validate() const {
  if (n_values.empty() || r_values.empty()) throw ConfigError("grid needs n and r values");
  if (m_over_n.empty() == m_values.empty()) {
    throw ConfigError("grid needs exactly one of m and m_over_n");
  }
  if (trials < 1) throw ConfigError("trials must be at least 1");
  if (methods.empty()) throw ConfigError("grid needs at least one method");
  for (const Index n : n_values) {
    if (n < 1) throw ConfigError("n must be positive");
    for (const Index m : measurements_for(n)) {
      if (m < 1) throw ConfigError("every measurement count must be positive");
    }
  }
  for (const Index r : r_values) {
    if (r < 1) throw ConfigError("r must be positive");
    for (const Index n : n_values) {
      if (r > n) throw ConfigError("r exceeds n");
    }
  }
  if (kind == EnsembleKind::kDense) throw ConfigError("grid ensemble must be goe or bernoulli");
  if (kind == EnsembleKind::kBernoulli && !(rho > 0.0 && rho <= 1.0)) {
    throw ConfigError("rho must lie in (0, 1]");
  }
  validate_as_config(configs.gd, "gd");
  validate_as_config(configs.svp, "svp");
  validate_as_config(configs.admm, "admm");
  validate_as_config(configs.altmin, "altmin");
}

ExperimentGrid grid_from_config(const ConfigFile& file) {
  file.require_known_keys("grid", {"n", "r", "m", "m_over_n", "ensemble", "rho", "trials",
                                   "seed", "methods"});
  ExperimentGrid grid;
  if (auto v = file.get("grid", "n")) grid.n_values = to_index_list(*v, "grid.n");
  if (auto v = file.get("grid", "r")) grid.r_values = to_index_list(*v, "grid.r");
  if (auto v = file.get("grid", "m")) grid.m_values = to_index_list(*v, "grid.m");
  if (auto v = file.get("grid", "m_over_n")) grid.m_over_n = parse_number_list(*v);
  if (auto v = file.get("grid", "ensemble")) {
    try {
      grid.kind = parse_ensemble_kind(trim(*v));
    } catch (const InvalidArgument& e) {
      throw ConfigError(e.what());
    }
  }
  read_key(file, "grid", "rho", grid.rho,
           [](const std::string& v, const std::string& w) { return to_double(v, w); });
  if (auto v = file.get("grid", "trials")) grid.trials = static_cast<int>(to_int(*v, "grid.trials"));
  if (auto v = file.get("grid", "seed")) grid.seed = to_u64(*v, "grid.seed");
  if (auto v = file.get("grid", "methods")) {
    grid.methods.clear();
    for (auto name : split_commas(*v)) grid.methods.push_back(parse_method(name));
  }
  apply_method_sections(file, grid.configs);
  grid.validate();
  return grid;
}

BenchConfig BenchConfig::dense_scenario() {
  BenchConfig c;
  c.n = 400;
  c.r = 2;
  c.m = 6 * c.n;
  c.kind = EnsembleKind::kGoe;
  c.configs.gd.mu = 0.8;
  c.configs.svp.step = 1e-4;
  return c;
}

BenchConfig BenchConfig::sparse_scenario() {
  BenchConfig c;
  c.n = 600;
  c.r = 2;
  c.m = 7 * c.n;
  c.kind = EnsembleKind::kBernoulli;
  c.rho = 0.001;
  c.configs.gd.mu = 1.0;
  c.configs.svp.step = 1e-3;
  return c;
}

void BenchConfig::validate() const {
  if (n < 1 || r < 1 || r > n || m < 1) throw ConfigError("bench needs 1 <= r <= n and m >= 1");
  if (methods.empty()) throw ConfigError("bench needs at least one method");
  if (!(target > 0.0)) throw ConfigError("target must be positive");
  if (kind == EnsembleKind::kDense) throw ConfigError("bench ensemble must be goe or bernoulli");
  if (kind == EnsembleKind::kBernoulli && !(rho > 0.0 && rho <= 1.0)) {
    throw ConfigError("rho must lie in (0, 1]");
  }
}

BenchConfig bench_from_config(const ConfigFile& file) {
  file.require_known_keys("bench", {"scenario", "n", "r", "m", "m_over_n", "ensemble", "rho",
                                    "seed", "methods", "target"});
  BenchConfig c = BenchConfig::dense_scenario();
  if (auto v = file.get("bench", "scenario")) {
    const auto name = trim(*v);
    if (name == "sparse") {
      c = BenchConfig::sparse_scenario();
    } else if (name != "dense") {
      throw ConfigError("bench.scenario must be dense or sparse");
    }
  }
  const bool explicit_m = file.get("bench", "m").has_value();
  if (auto v = file.get("bench", "n")) {
    const double ratio = static_cast<double>(c.m) / static_cast<double>(c.n);
    c.n = to_int(*v, "bench.n");
    if (!explicit_m) c.m = static_cast<Index>(std::llround(ratio * static_cast<double>(c.n)));
  }
  if (auto v = file.get("bench", "r")) c.r = to_int(*v, "bench.r");
  if (explicit_m) c.m = to_int(*file.get("bench", "m"), "bench.m");
  if (auto v = file.get("bench", "m_over_n")) {
    if (explicit_m) throw ConfigError("bench takes m or m_over_n, not both");
    c.m = static_cast<Index>(std::llround(to_double(*v, "bench.m_over_n") * c.n));
  }
  if (auto v = file.get("bench", "ensemble")) {
    try {
      c.kind = parse_ensemble_kind(trim(*v));
    } catch (const InvalidArgument& e) {
      throw ConfigError(e.what());
    }
  }
  if (auto v = file.get("bench", "rho")) c.rho = to_double(*v, "bench.rho");
  if (auto v = file.get("bench", "seed")) c.seed = to_u64(*v, "bench.seed");
  if (auto v = file.get("bench", "target")) c.target = to_double(*v, "bench.target");
  if (auto v = file.get("bench", "methods")) {
    c.methods.clear();
    for (auto name : split_commas(*v)) c.methods.push_back(parse_method(name));
  }
  apply_method_sections(file, c.configs);
  c.validate();
  return c;
}

void TraceConfig::validate() const {
  if (n < 1 || r < 1 || r > n || m < 1) throw ConfigError("trace needs 1 <= r <= n and m >= 1");
  if (kind == EnsembleKind::kDense) throw ConfigError("trace ensemble must be goe or bernoulli");
  validate_as_config(gd, "gd");
}

TraceConfig trace_from_config(const ConfigFile& file) {
  file.require_known_keys("trace", {"n", "r", "m", "ensemble", "rho", "seed"});
  TraceConfig c;
  if (auto v = file.get("trace", "n")) c.n = to_int(*v, "trace.n");
  if (auto v = file.get("trace", "r")) c.r = to_int(*v, "trace.r");
  if (auto v = file.get("trace", "m")) c.m = to_int(*v, "trace.m");
  if (auto v = file.get("trace", "ensemble")) {
    try {
      c.kind = parse_ensemble_kind(trim(*v));
    } catch (const InvalidArgument& e) {
      throw ConfigError(e.what());
    }
  }
  if (auto v = file.get("trace", "rho")) c.rho = to_double(*v, "trace.rho");
  if (auto v = file.get("trace", "seed")) c.seed = to_u64(*v, "trace.seed");
  MethodConfigs configs;
  configs.gd = c.gd;
  apply_method_sections(file, configs);
  c.gd = configs.gd;
  c.validate();
  return c;
}

}  // namespace rankmin
