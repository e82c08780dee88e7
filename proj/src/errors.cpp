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

#include "nhsim/errors.hpp"

namespace nhsim {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::InvalidInput: return "invalid-input";
    case ErrorKind::Precondition: return "precondition";
    case ErrorKind::PositivityViolation: return "positivity-violation";
    case ErrorKind::SingularPencil: return "singular-pencil";
    case ErrorKind::Domain: return "domain";
    case ErrorKind::NonInvertibleMetric: return "non-invertible-metric";
    case ErrorKind::Calibration: return "calibration-domain";
    case ErrorKind::IntegrationFailure: return "integration-failure";
    case ErrorKind::ConvergenceFailure: return "convergence-failure";
    case ErrorKind::DilationConsistency: return "dilation-consistency";
    case ErrorKind::Parse: return "parse";
    case ErrorKind::DegenerateFit: return "degenerate-fit";
    case ErrorKind::UnsupportedRegime: return "unsupported-regime";
    case ErrorKind::Config: return "config";
  }
  return "unknown";
}

}  // namespace nhsim
