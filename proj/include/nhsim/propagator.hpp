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

// Time-ordered exponentials by the midpoint product of exponentials
// (second-order Magnus per step).

#include <cmath>
#include <functional>
#include <string>

#include "nhsim/linalg.hpp"

namespace nhsim {

template <int N>
struct PropagatorSpec {
  std::function<CMatrix<N>(double)> generator;
  double sign = 1.0;  ///< +1 gives exp(-(i/hbar) int H), -1 gives exp(+(i/hbar) int H)
  double t0 = 0.0;
  double t1 = 0.0;
  int n_steps = 64;
  double tol = 1e-9;
  double hbar = 1.0;
  int max_doublings = 20;
};

/// Product over steps j = n..1 of exp(sign * (-i/hbar) * H(t_j^mid) * dt), with
/// later times on the left.
template <int N>
CMatrix<N> evolve(const PropagatorSpec<N>& spec) {
  if (spec.n_steps < 1) throw Error(ErrorKind::Precondition, "evolve: n_steps must be >= 1");
  if (!spec.generator) throw Error(ErrorKind::Precondition, "evolve: no generator");
  const double dt = (spec.t1 - spec.t0) / spec.n_steps;
  const Complex factor = spec.sign * Complex(0.0, -dt / spec.hbar);
  CMatrix<N> u = CMatrix<N>::Identity();
  for (int j = 0; j < spec.n_steps; ++j) {
    const double tm = spec.t0 + (j + 0.5) * dt;
    const CMatrix<N> h = spec.generator(tm);
    if (!all_finite(h))
      throw IntegrationFailure(tm, "evolve: non-finite generator at t = " + std::to_string(tm));
    u = matexp<N>(h, factor) * u;
  }
  return u;
}

template <int N>
struct ConvergedPropagator {
  CMatrix<N> u;
  int n_steps_used = 0;
  double last_delta = 0.0;
};

/// Doubles the step count from `spec.n_steps` until successive propagators
/// differ by less than `spec.tol` (Frobenius).
template <int N>
ConvergedPropagator<N> evolve_converged(const PropagatorSpec<N>& spec) {
  if (!(spec.tol > 0.0)) throw Error(ErrorKind::Precondition, "evolve_converged: tol must be > 0");
  PropagatorSpec<N> s = spec;
  CMatrix<N> prev = evolve<N>(s);
  double delta = 0.0;
  for (int d = 0; d < spec.max_doublings; ++d) {
    s.n_steps *= 2;
    CMatrix<N> next = evolve<N>(s);
    delta = (next - prev).norm();
    if (delta < spec.tol) return {next, s.n_steps, delta};
    prev = std::move(next);
  }
  throw Error(ErrorKind::ConvergenceFailure,
              "evolve_converged: no convergence, last delta " + std::to_string(delta));
}

}  // namespace nhsim
