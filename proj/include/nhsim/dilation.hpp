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

// Naimark dilation of the two-level non-Hermitian Hamiltonian onto an
// ancilla (most significant tensor factor) plus qubit Hermitian Hamiltonian
//
//   H_aq(t) = 1 (x) Lambda(t) + sigma_y (x) Gamma(t).
//
// The ancilla-0 block of the dilated state follows the non-Hermitian
// evolution, and the ancilla-1 block carries eta(t) applied to it.

#include <vector>

#include "nhsim/linalg.hpp"
#include "nhsim/model.hpp"

namespace nhsim {

struct DilationOptions {
  double t0 = -20.0;
  double t1 = 20.0;
  int n_grid = 801;   ///< calibration lattice, also the propagation lattice
  int substeps = 512; ///< midpoint steps per lattice interval
  double m0 = 2.0;    ///< trial seed scalar, > 1
  double f = 1.1;     ///< minimum eigenvalue pinned for M(t), > 1
  /// Multiplies the commutator term of Gamma. Anything other than +1 breaks
  /// the dilation; exists for fault-injection checks only.
  double gamma_commutator_sign = 1.0;
};

/// All matrices Hermitian; lambda/gamma residuals are the Hermiticity
/// residuals before symmetrisation.
struct DilatedOperators {
  CMatrix2 m;
  CMatrix2 eta;
  CMatrix2 deta;
  CMatrix2 lambda;
  CMatrix2 gamma;
  CMatrix4 h_aq;
  double lambda_residual = 0.0;
  double gamma_residual = 0.0;
};

/// Calibrated dilation for one parameter set. Immutable once built.
class DilationContext {
 public:
  DilationContext(const ModelParams& params, const DilationOptions& options);

  const ModelParams& params() const { return params_; }
  const DilationOptions& options() const { return options_; }
  const std::vector<double>& grid() const { return grid_; }
  double t0() const { return options_.t0; }
  double t1() const { return options_.t1; }
  /// Calibrated M(t0) = m0_scalar * identity.
  double m0_scalar() const { return m0_scalar_; }
  /// Smallest eigenvalue of m0 * G G^dagger over the lattice.
  double mu_min() const { return mu_min_; }
  /// G(t_i) = T exp(-(i/hbar) int H^dagger) at each lattice point.
  const std::vector<CMatrix2>& g_cache() const { return g_cache_; }

  /// G at an arbitrary t in [t0, t1], integrated from the lattice point below.
  CMatrix2 g_of_t(double t) const;

  /// Half-step used for G between lattice points i and i + 1.
  double half_step(std::size_t interval) const;

 private:
  ModelParams params_;
  DilationOptions options_;
  std::vector<double> grid_;
  std::vector<CMatrix2> g_cache_;
  double mu_min_ = 0.0;
  double m0_scalar_ = 0.0;
};

/// Validates the options and calibrates M0 so that the minimum lattice
/// eigenvalue of M(t) is exactly f.
DilationContext build_context(const ModelParams& p, const DilationOptions& options);

/// Convenience overload mirroring the plain parameter list.
DilationContext build_context(const ModelParams& p, double t0, double t1, int n_grid,
                              double m0 = 2.0, double f = 1.1);

/// M(t) = G(t) M0 G(t)^dagger.
CMatrix2 m_of_t(const DilationContext& ctx, double t);

/// Analytic dM/dt = -(i/hbar) (H^dagger M - M H).
CMatrix2 m_derivative(const CMatrix2& h, const CMatrix2& m, double hbar);

struct EtaPair {
  CMatrix2 eta;
  CMatrix2 deta;
};

EtaPair eta_and_derivative(const DilationContext& ctx, double t);

/// Builds every dilated operator at time t from a given M(t). Throws
/// DilationConsistency when Lambda or Gamma are far from Hermitian.
DilatedOperators dilated_operators(const CMatrix2& h, const CMatrix2& m, double hbar,
                                   double gamma_commutator_sign = 1.0);

DilatedOperators dilated_operators(const DilationContext& ctx, double t);

struct LambdaGamma {
  CMatrix2 lambda;
  CMatrix2 gamma;
  double lambda_residual = 0.0;
  double gamma_residual = 0.0;
};

LambdaGamma lambda_gamma(const DilationContext& ctx, double t);

CMatrix4 h_aq(const DilationContext& ctx, double t);

/// 1 (x) lambda + sigma_y (x) gamma.
CMatrix4 assemble_h_aq(const CMatrix2& lambda, const CMatrix2& gamma);

/// 2 atan(eta0) with eta0 = sqrt(M0 - 1).
double ancilla_theta(const DilationContext& ctx);

/// exp(-i theta sigma_y / 2).
CMatrix2 ry(double theta);

/// U_aq(t_i, t0) at every lattice point, integrating H_aq with `substeps`
/// midpoint steps per interval (M at each midpoint comes from the G lattice).
std::vector<CMatrix4> dilated_propagators(const DilationContext& ctx);

/// U_q(t_i, t0) of the bare non-Hermitian Hamiltonian on the same lattice and
/// step size as dilated_propagators.
std::vector<CMatrix2> qubit_propagators(const DilationContext& ctx);

}  // namespace nhsim
