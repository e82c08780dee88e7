// Copyright 2026 The nhsim Authors
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
#include <string_view>

namespace nhsim {

enum class ErrorKind {
  InvalidInput,
  Precondition,
  PositivityViolation,
  SingularPencil,
  Domain,
  NonInvertibleMetric,
  Calibration,
  IntegrationFailure,
  ConvergenceFailure,
  DilationConsistency,
  Parse,
  DegenerateFit,
  UnsupportedRegime,
  Config,
};

std::string_view to_string(ErrorKind kind);

/// Base exception for every library failure. `kind()` lets callers (the CLI in
/// particular) map failures onto exit codes without string matching.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

/// Thrown by psd_sqrt when an eigenvalue lies below the tolerance.
class PositivityViolation : public Error {
 public:
  PositivityViolation(double eigenvalue, const std::string& what)
      : Error(ErrorKind::PositivityViolation, what), eigenvalue_(eigenvalue) {}

  double eigenvalue() const noexcept { return eigenvalue_; }

 private:
  double eigenvalue_;
};

/// Thrown when a time-ordered exponential meets a non-finite generator.
class IntegrationFailure : public Error {
 public:
  IntegrationFailure(double t, const std::string& what)
      : Error(ErrorKind::IntegrationFailure, what), t_(t) {}

  double time() const noexcept { return t_; }

 private:
  double t_;
};

/// Line numbers are 1-based.
class ParseError : public Error {
 public:
  ParseError(int line, const std::string& what)
      : Error(ErrorKind::Parse, "line " + std::to_string(line) + ": " + what),
        line_(line) {}

  int line() const noexcept { return line_; }

 private:
  int line_;
};

inline void require(bool cond, ErrorKind kind, const std::string& what) {
  if (!cond) throw Error(kind, what);
}

}  // namespace nhsim
