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

#include <cstdint>
#include <initializer_list>
#include <random>

namespace rankmin {

/// SplitMix64 finalizer (Steele, Lea, Flood 2014). Used to derive
/// statistically independent child seeds from a parent seed.
std::uint64_t splitmix64(std::uint64_t x);

/// Seeded random stream.
///
/// The engine is std::mt19937_64, whose output sequence is fixed by the C++
/// standard, so a seed reproduces the same draws on every conforming
/// toolchain. Uniform and normal variates are produced by the routines below
/// rather than by <random> distributions, whose algorithms are
/// implementation-defined.
///
/// Streams are splittable: `split(k)` derives a child seed as
/// splitmix64(seed ^ splitmix64(k + golden)) and never consumes draws from the
/// parent, so per-trial streams are independent of the order in which trials
/// run.
class Rng {
 public:
  explicit Rng(std::uint64_t seed);

  std::uint64_t seed() const { return seed_; }

  std::uint64_t next_u64() { return engine_(); }

  /// Uniform on [0, 1) with 53 random bits.
  double uniform();

  /// Uniform on (0, 1]; safe to take the logarithm of.
  double uniform_open_zero();

  /// Standard normal via the Box-Muller transform (pairs are cached).
  double normal();

  /// Child stream keyed by `stream`.
  Rng split(std::uint64_t stream) const;

  /// Child stream keyed by a tuple of identifiers, e.g. (n, r, m, trial).
  Rng split(std::initializer_list<std::uint64_t> path) const;

 private:
  std::uint64_t seed_;
  std::mt19937_64 engine_;
  double cached_normal_ = 0.0;
  bool has_cached_normal_ = false;
};

}  // namespace rankmin
