// Copyright 2026 The vnelab Authors.
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

namespace vnelab {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed or out-of-range input (bad group spec, wrong sizes, ...).
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// Operand shapes or groups do not match.
class ShapeMismatch : public Error {
 public:
  using Error::Error;
};

/// An operation restricted to abelian groups received a nonabelian one.
class NonAbelianGroup : public Error {
 public:
  using Error::Error;
};

/// A structural check failed (not a projection, not a fundamental domain,
/// actions do not commute, ...).
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// The SDP solver did not reach an optimal certificate.
class SolverFailure : public Error {
 public:
  using Error::Error;
};

}  // namespace vnelab
