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

// The pseudo-Hermitian Landau-Zener-Stueckelberg-Majorana two-level model.
//
// Units: time in sqrt(hbar/v), energies and omega0 in sqrt(hbar*v). With the
// defaults hbar = v = 1 these coincide with plain numbers.

#include <utility>

#include "nhsim/linalg.hpp"

namespace nhsim {

struct ModelParams {
  double k = 0.5;       ///< non-Hermiticity degree; k = 1 is the Hermitian model
  double omega0 = 1.0;  ///< coupling, in sqrt(hbar v)
  double v = 1.0;       ///< sweep rate, must be positive
  double hbar = 1.0;

  /// Throws Config if v or hbar are not positive or any field is non-finite.
  void validate() const;
  double epsilon(double t) const { return v * t; }
};

/// Hamiltonian 1/2 [[-eps, omega0], [k omega0, eps]].
CMatrix2 hamiltonian(double t, const ModelParams& p);

struct AdiabaticPair {
  Complex e_plus;
  Complex e_minus;
  Complex delta_e;      ///< principal sqrt of k omega0^2 + eps^2
  CVector2 state_plus;  ///< (-eps + dE, k omega0), unnormalised unless requested
  CVector2 state_minus;
  bool at_exceptional_point = false;  ///< |k omega0^2 + eps^2| <= 1e-12
};

AdiabaticPair adiabatic(double t, const ModelParams& p, bool normalize = false);

/// exp(-pi k omega0^2 / (2 hbar v)).
double lzsm_probability(const ModelParams& p);

struct AsymptoticTransitions {
  double p01;
  double p10;
};

/// p01 = k (1 - P), p10 = (1 - P) / k. Throws Domain for k == 0.
AsymptoticTransitions asymptotic_transitions(const ModelParams& p);

/// The Hamiltonian after a pi/2 rotation about x (sigma_y -> sigma_z,
/// sigma_z -> -sigma_y); it has the generic PT-symmetric form [[a, b], [b*, a*]].
CMatrix2 rotated_hamiltonian(double t, const ModelParams& p);

/// Eigenvectors of the rotated Hamiltonian, (+-dE - i(k-1)omega0/2, (k+1)omega0/2 + i eps).
std::pair<CVector2, CVector2> rotated_eigenstates(double t, const ModelParams& p);

/// Scalar by which sigma_x K maps the rotated eigenstate with sign `sign`
/// onto itself: (sign dE + i(k-1)omega0/2) / ((k+1)omega0/2 + i eps).
Complex pt_eigenvalue(double t, const ModelParams& p, int sign);

/// sigma_x * conj(v): the parity-time operator on a two-level state.
CVector2 apply_pt(const CVector2& v);

/// Linear part L of the antilinear commutator [H, PT] = L K, namely
/// L = H sigma_x - sigma_x conj(H).
CMatrix2 pt_commutator_linear_part(const CMatrix2& h);

/// a * diag(k, 1). Throws NonInvertibleMetric for a == 0 or k == 0.
CMatrix2 pseudo_metric(double k, double a = 1.0);

/// || eta H eta^-1 - H^dagger ||_F.
double pseudo_residual(const CMatrix2& h, const CMatrix2& eta);

/// Norm of the component of `a` orthogonal to `b`, relative to |a|. Zero when
/// the two vectors are parallel (or `a` vanishes).
template <int N>
double colinearity_residual(const CVector<N>& a, const CVector<N>& b) {
  const double na = a.norm();
  const double nb2 = b.squaredNorm();
  if (na == 0.0) return 0.0;
  if (nb2 == 0.0) return 1.0;
  const Complex c = b.dot(a) / nb2;
  return (a - c * b).norm() / na;
}

}  // namespace nhsim
