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

#include "rankmin/instance_io.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <json.hpp>

#include "rankmin/error.hpp"

namespace rankmin {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr int kFormatVersion = 1;

template <typename T>
T to_little_endian(T value) {
  if constexpr (std::endian::native == std::endian::little) {
    return value;
  } else {
    unsigned char bytes[sizeof(T)];
    std::memcpy(bytes, &value, sizeof(T));
    for (std::size_t i = 0; i < sizeof(T) / 2; ++i) {
      std::swap(bytes[i], bytes[sizeof(T) - 1 - i]);
    }
    std::memcpy(&value, bytes, sizeof(T));
    return value;
  }
}

class BinaryWriter {
 public:
  explicit BinaryWriter(const fs::path& path)
      : path_(path), out_(path, std::ios::binary | std::ios::trunc) {
    if (!out_) throw ConfigError("cannot open " + path.string() + " for writing");
  }

  template <typename T>
  void put(T value) {
    value = to_little_endian(value);
    out_.write(reinterpret_cast<const char*>(&value), sizeof(T));
  }

  void put_doubles(const double* data, std::size_t count) {
    if constexpr (std::endian::native == std::endian::little) {
      out_.write(reinterpret_cast<const char*>(data),
                 static_cast<std::streamsize>(count * sizeof(double)));
    } else {
      for (std::size_t i = 0; i < count; ++i) put(data[i]);
    }
  }

  void close() {
    out_.close();
    if (!out_) throw ConfigError("write failed for " + path_.string());
  }

 private:
  fs::path path_;
  std::ofstream out_;
};

class BinaryReader {
 public:
  explicit BinaryReader(const fs::path& path) : path_(path), in_(path, std::ios::binary) {
    if (!in_) throw ConfigError("cannot open " + path.string());
  }

  template <typename T>
  T get() {
    T value;
    in_.read(reinterpret_cast<char*>(&value), sizeof(T));
    if (!in_) throw ConfigError("truncated file " + path_.string());
    return to_little_endian(value);
  }

  void get_doubles(double* data, std::size_t count) {
    if constexpr (std::endian::native == std::endian::little) {
      in_.read(reinterpret_cast<char*>(data),
               static_cast<std::streamsize>(count * sizeof(double)));
      if (!in_) throw ConfigError("truncated file " + path_.string());
    } else {
      for (std::size_t i = 0; i < count; ++i) data[i] = get<double>();
    }
  }

  void expect_end() {
    if (in_.peek() != std::char_traits<char>::eof()) {
      throw ConfigError("trailing bytes in " + path_.string());
    }
  }

 private:
  fs::path path_;
  std::ifstream in_;
};

}  // namespace

void write_instance(const Instance& instance, const fs::path& dir) {
  if (!instance.ensemble) throw ConfigError("instance has no ensemble");
  fs::create_directories(dir);
  const auto& ens = *instance.ensemble;

  json meta;
  meta["format"] = "rankmin-instance";
  meta["version"] = kFormatVersion;
  meta["n"] = ens.n();
  meta["m"] = ens.m();
  meta["kind"] = std::string(to_string(ens.kind()));
  meta["rho"] = ens.rho();
  meta["seed"] = instance.seed;
  meta["has_truth"] = instance.truth.has_value();
  if (instance.truth) {
    const auto& t = *instance.truth;
    meta["r"] = t.rank();
    meta["sigma"] = std::vector<double>(t.sigma.begin(), t.sigma.end());
    meta["kappa"] = t.kappa;
  } else {
    meta["r"] = 0;
  }
  {
    std::ofstream out(dir / "meta.json");
    if (!out) throw ConfigError("cannot write " + (dir / "meta.json").string());
    out << meta.dump(2) << '\n';
  }

  BinaryWriter b(dir / "b.f64");
  b.put_doubles(instance.b.data(), static_cast<std::size_t>(instance.b.size()));
  b.close();

  if (instance.truth) {
    BinaryWriter z(dir / "zstar.f64");
    const auto& zs = instance.truth->zstar;
    z.put_doubles(zs.data(), static_cast<std::size_t>(zs.size()));
    z.close();
  }

  if (ens.is_sparse()) {
    BinaryWriter coo(dir / "ensemble.coo");
    BinaryWriter counts(dir / "ensemble_nnz.u64");
    for (Index i = 0; i < ens.m(); ++i) {
      auto entries = ens.sparse_entries(i);
      counts.put(static_cast<std::uint64_t>(entries.size()));
      for (const auto& e : entries) {
        coo.put(e.row);
        coo.put(e.col);
        coo.put(e.value);
      }
    }
    coo.close();
    counts.close();
  } else {
    BinaryWriter mats(dir / "ensemble.f64");
    const auto& cols = ens.columns();
    mats.put_doubles(cols.data(), static_cast<std::size_t>(cols.size()));
    mats.close();
  }
}

Instance read_instance(const fs::path& dir) {
  json meta;
  {
    std::ifstream in(dir / "meta.json");
    if (!in) throw ConfigError("no meta.json in " + dir.string());
    try {
      in >> meta;
    } catch (const json::exception& e) {
      throw ConfigError("malformed meta.json: " + std::string(e.what()));
    }
  }
  try {
    if (meta.at("format") != "rankmin-instance" || meta.at("version") != kFormatVersion) {
      throw ConfigError("unsupported instance format in " + dir.string());
    }
    const Index n = meta.at("n").get<Index>();
    const Index m = meta.at("m").get<Index>();
    const Index r = meta.at("r").get<Index>();
    const auto kind = parse_ensemble_kind(meta.at("kind").get<std::string>());
    const double rho = meta.at("rho").get<double>();
    if (n < 1 || m < 1) throw ConfigError("instance dimensions must be positive");

    Instance instance;
    instance.seed = meta.at("seed").get<std::uint64_t>();

    instance.b.resize(m);
    BinaryReader b(dir / "b.f64");
    b.get_doubles(instance.b.data(), static_cast<std::size_t>(m));
    b.expect_end();

    if (meta.at("has_truth").get<bool>()) {
      MatrixXd zstar(n, r);
      BinaryReader z(dir / "zstar.f64");
      z.get_doubles(zstar.data(), static_cast<std::size_t>(zstar.size()));
      z.expect_end();
      instance.truth = GroundTruth::from_factor(zstar);
    }

    if (kind == EnsembleKind::kBernoulli) {
      BinaryReader counts(dir / "ensemble_nnz.u64");
      BinaryReader coo(dir / "ensemble.coo");
      std::vector<SparseMatrix> mats(static_cast<std::size_t>(m));
      for (auto& A : mats) {
        A.n = n;
        const auto count = counts.get<std::uint64_t>();
        A.entries.reserve(count);
        for (std::uint64_t k = 0; k < count; ++k) {
          SparseEntry e{};
          e.row = coo.get<std::uint32_t>();
          e.col = coo.get<std::uint32_t>();
          e.value = coo.get<double>();
          A.entries.push_back(e);
        }
      }
      counts.expect_end();
      coo.expect_end();
      instance.ensemble = std::make_shared<const MeasurementEnsemble>(
          MeasurementEnsemble::from_sparse(n, mats, rho));
    } else {
      MatrixXd cols(n * n, m);
      BinaryReader mats(dir / "ensemble.f64");
      mats.get_doubles(cols.data(), static_cast<std::size_t>(cols.size()));
      mats.expect_end();
      instance.ensemble = std::make_shared<const MeasurementEnsemble>(
          MeasurementEnsemble::from_columns(n, std::move(cols), kind));
    }
    return instance;
  } catch (const json::exception& e) {
    throw ConfigError("malformed meta.json: " + std::string(e.what()));
  }
}

}  // namespace rankmin
