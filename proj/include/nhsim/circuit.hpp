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

// Two-qubit circuits over {U(theta, phi, lambda), CNOT} and their synthesis.
//
// Qubit 1 is the ancilla and the most significant tensor factor; qubit 0 is
// the simulated system qubit. Basis order is |q1 q0> = |00>, |01>, |10>, |11>.

#include <array>
#include <string>
#include <string_view>
#include <vector>

#include "nhsim/linalg.hpp"

namespace nhsim {

struct Gate {
  enum class Kind { Euler, Cnot };

  Kind kind = Kind::Euler;
  int qubit = 0;    ///< euler target
  int control = 1;  ///< cnot only
  int target = 0;   ///< cnot only
  double theta = 0.0;
  double phi = 0.0;
  double lambda = 0.0;

  static Gate euler(int qubit, double theta, double phi, double lambda);
  static Gate cnot(int control, int target);

  bool operator==(const Gate&) const = default;
};

struct Circuit {
  int n_qubits = 2;
  std::vector<Gate> gates;
  double global_phase = 0.0;
  bool measured = false;

  int cnot_count() const;
  int euler_count() const;

  bool operator==(const Circuit&) const = default;
};

/// [[cos(t/2), -e^{i l} sin(t/2)], [e^{i p} sin(t/2), e^{i(p+l)} cos(t/2)]].
CMatrix2 euler_matrix(double theta, double phi, double lambda);

struct ZyzAngles {
  double global_phase = 0.0;
  double theta = 0.0;   ///< [0, pi]
  double phi = 0.0;     ///< (-pi, pi]
  double lambda = 0.0;  ///< (-pi, pi]
};

/// U = e^{i global_phase} euler_matrix(theta, phi, lambda). At the theta = 0
/// gimbal point lambda is folded into phi.
ZyzAngles zyz_decompose(const CMatrix2& u);

/// Canonical (Cartan) form U = e^{i phase} (a1 (x) b1) exp(i(cx XX + cy YY + cz ZZ)) (a2 (x) b2)
/// with every coefficient folded into [-pi/4, pi/4].
struct KakDecomposition {
  double global_phase = 0.0;
  CMatrix2 a1, b1;  ///< left (later) local factors on qubit 1 and qubit 0
  CMatrix2 a2, b2;  ///< right (earlier) local factors
  std::array<double, 3> coefficients{};
  int cnot_count = 3;  ///< minimal count for the local-equivalence class
};

KakDecomposition kak(const CMatrix4& u);

/// exp(i(cx XX + cy YY + cz ZZ)).
CMatrix4 canonical_gate(double cx, double cy, double cz);

/// Synthesises U into at most three CNOTs and eight Euler gates.
Circuit kak_decompose(const CMatrix4& u);

/// Matrix of a single gate on the two-qubit register.
CMatrix4 gate_matrix(const Gate& g);

CMatrix4 to_unitary(const Circuit& c);

/// min over phases of || e^{i phase} a - b ||_F.
double phase_aligned_distance(const CMatrix4& a, const CMatrix4& b);

/// Local invariants (G1 complex, G2 real) of a two-qubit unitary. Two gates
/// are locally equivalent exactly when these agree.
struct MakhlinInvariants {
  Complex g1;
  double g2;
};

MakhlinInvariants makhlin_invariants(const CMatrix4& u);

/// Matrix of the magic (Bell) basis; local gates become real orthogonal in it.
const CMatrix4& magic_basis();

/// Shortest round-trip decimal; integral values keep a trailing ".0".
std::string format_double(double x);

std::string serialize(const Circuit& c);
Circuit parse_circuit(std::string_view text);

}  // namespace nhsim
