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

#include "nhsim/model.hpp"

#include <cmath>
#include <numbers>

namespace nhsim {

void ModelParams::validate() const {
  if (!std::isfinite(k) || !std::isfinite(omega0) || !std::isfinite(v) || !std::isfinite(hbar))
    throw Error(ErrorKind::Config, "model parameters must be finite");
  if (!(v > 0.0)) throw Error(ErrorKind::Config, "sweep rate v must be positive");
  if (!(hbar > 0.0)) throw Error(ErrorKind::Config, "hbar must be positive");
}

CMatrix2 hamiltonian(double t, const ModelParams& p) {
  const double eps = p.epsilon(t);
  CMatrix2 h;
  h << -eps, p.omega0, p.k * p.omega0, eps;
  return 0.5 * h;
}

AdiabaticPair adiabatic(double t, const ModelParams& p, bool normalize) {
  const double eps = p.epsilon(t);
  const double radicand = p.k * p.omega0 * p.omega0 + eps * eps;
  AdiabaticPair out;
  out.delta_e = std::sqrt(Complex(radicand, 0.0));
  out.e_plus = 0.5 * out.delta_e;
  out.e_minus = -0.5 * out.delta_e;
  out.state_plus << -eps + out.delta_e, p.k * p.omega0;
  out.state_minus << -eps - out.delta_e, p.k * p.omega0;
  out.at_exceptional_point = std::abs(radicand) <= 1e-12;
  if (normalize) {
    if (out.state_plus.norm() > 0.0) out.state_plus.normalize();
    if (out.state_minus.norm() > 0.0) out.state_minus.normalize();
  }
  return out;
}

double lzsm_probability(const ModelParams& p) {
  return std::exp(-std::numbers::pi * p.k * p.omega0 * p.omega0 / (2.0 * p.hbar * p.v));
}

AsymptoticTransitions asymptotic_transitions(const ModelParams& p) {
  if (p.k == 0.0) throw Error(ErrorKind::Domain, "asymptotic_transitions: k must be nonzero");
  const double q = 1.0 - lzsm_probability(p);
  return {p.k * q, q / p.k};
}

CMatrix2 rotated_hamiltonian(double t, const ModelParams& p) {
  const double eps = p.epsilon(t);
  const double sym = 0.5 * (p.k + 1.0) * p.omega0;
  const double anti = 0.5 * (p.k - 1.0) * p.omega0;
  CMatrix2 h;
  h << -kI * anti, sym - kI * eps, sym + kI * eps, kI * anti;
  return 0.5 * h;
}

std::pair<CVector2, CVector2> rotated_eigenstates(double t, const ModelParams& p) {
  const double eps = p.epsilon(t);
  const Complex de = std::sqrt(Complex(p.k * p.omega0 * p.omega0 + eps * eps, 0.0));
  const double sym = 0.5 * (p.k + 1.0) * p.omega0;
  const double anti = 0.5 * (p.k - 1.0) * p.omega0;
  CVector2 plus, minus;
  plus << de - kI * anti, sym + kI * eps;
  minus << -de - kI * anti, sym + kI * eps;
  return {plus, minus};
}

Complex pt_eigenvalue(double t, const ModelParams& p, int sign) {
  const double eps = p.epsilon(t);
  const Complex de = std::sqrt(Complex(p.k * p.omega0 * p.omega0 + eps * eps, 0.0));
  const double sym = 0.5 * (p.k + 1.0) * p.omega0;
  const double anti = 0.5 * (p.k - 1.0) * p.omega0;
  return (static_cast<double>(sign) * de + kI * anti) / (sym + kI * eps);
}

CVector2 apply_pt(const CVector2& v) { return pauli::x() * v.conjugate(); }

CMatrix2 pt_commutator_linear_part(const CMatrix2& h) {
  const CMatrix2 sx = pauli::x();
  return h * sx - sx * h.conjugate();
}

CMatrix2 pseudo_metric(double k, double a) {
  if (a == 0.0 || k == 0.0)
    throw Error(ErrorKind::NonInvertibleMetric, "pseudo_metric: a and k must be nonzero");
  CMatrix2 eta = CMatrix2::Zero();
  eta(0, 0) = a * k;
  eta(1, 1) = a;
  return eta;
}

double pseudo_residual(const CMatrix2& h, const CMatrix2& eta) {
  return (eta * h * eta.inverse() - h.adjoint()).norm();
}

}  // namespace nhsim
