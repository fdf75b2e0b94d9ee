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

#include <stdexcept>
#include <string>

namespace rankmin {

/// Base class for every error thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A dimension, rank, density or count outside its admissible range.
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// Operands whose shapes do not agree.
class ShapeError : public Error {
 public:
  using Error::Error;
};

/// Non-finite input or a numerical routine that failed to meet its contract.
class NumericError : public Error {
 public:
  using Error::Error;
};

/// A matrix factorization (Cholesky) that could not be completed.
class FactorizationError : public NumericError {
 public:
  using NumericError::NumericError;
};

/// Malformed configuration, missing ground truth, unreadable files.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Too few samples for a statistical estimate.
class InsufficientData : public Error {
 public:
  using Error::Error;
};

}  // namespace rankmin
