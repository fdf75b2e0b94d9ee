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

#include "rankmin/measurement.hpp"

namespace rankmin {

// On-disk instance layout (one directory):
//
//   meta.json          n, r, m, kind, rho, seed, has_truth, sigma[], kappa
//   b.f64              m float64 values
//   zstar.f64          n*r float64, column-major   (only when has_truth)
//   ensemble.f64       m*n*n float64; matrix i is the i-th block of n*n,
//                      column-major                 (goe / dense)
//   ensemble.coo       (row:u32, col:u32, value:f64) records, matrices
//                      back to back                 (bernoulli)
//   ensemble_nnz.u64   m record counts, one per matrix (bernoulli)
//
// All binary files are little-endian with no header.

void write_instance(const Instance& instance, const std::filesystem::path& dir);
Instance read_instance(const std::filesystem::path& dir);

}  // namespace rankmin
