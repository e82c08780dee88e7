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

#include <array>
#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "nhsim/circuit.hpp"
#include "nhsim/dilation.hpp"
#include "nhsim/model.hpp"
#include "nhsim/simulator.hpp"

namespace nhsim {

using PopPair = std::array<double, 2>;

/// |<f|U_q(t, t0)|initial>|^2 for f = 0, 1 via the midpoint propagator.
/// max_dt bounds the step size.
PopPair theory_probs(const ModelParams& p, double t0, double t, int initial,
                     double max_dt = 1e-4);

/// Ancilla rotation and qubit initialiser: R_y(theta) (x) X^initial.
CMatrix4 preparation(double theta, int initial);

/// Synthesised circuit for U_aq * (R_y(theta) (x) Init).
Circuit build_point_circuit(const DilationContext& ctx, const CMatrix4& u_aq, int initial);

/// (counts[00], counts[01]) / shots.
PopPair postselect(const ShotCounts& counts);

enum class FitMethod {
  LeastSquares,       ///< n = sum(m p) / sum(m^2) over all points and both components
  InitialPopulation,  ///< 1/n = m0 + m1 at the first point
};

struct NormalizationFit {
  double n_k = 0.0;
  double residual = 0.0;  ///< sum of squared errors of n * m - p
  int n_points = 0;
};

NormalizationFit fit_normalization(const std::vector<PopPair>& measured,
                                   const std::vector<PopPair>& predicted,
                                   FitMethod method = FitMethod::LeastSquares);

/// k * p_to_0 + p_to_1; constant k for initial 0 and 1 for initial 1.
double invariant(double k, const PopPair& p);

struct RunRecord {
  double t = 0.0;
  PopPair theory{};
  Populations circuit_raw{};      ///< exact statevector populations, no postselection
  PopPair circuit_post{};         ///< ancilla-0 block of circuit_raw
  PopPair circuit_norm{};         ///< circuit_post scaled by the exact-mode fit
  double invariant_theory = 0.0;
  double invariant_circuit = 0.0;
  std::optional<ShotCounts> counts;
  PopPair sampled_raw{};
  PopPair sampled_norm{};
  double invariant_sampled = 0.0;
};

/// Propagators on the full lattice of one context.
struct DilatedRun {
  DilationContext ctx;
  std::vector<CMatrix4> u_aq;
  std::vector<CMatrix2> u_q;
};

DilatedRun propagate(const ModelParams& p, const DilationOptions& options);

/// Output points are every refinement-th lattice point; n_grid must equal
/// (n_points - 1) * refinement + 1.
struct Experiment {
  ModelParams params;
  int initial = 0;
  double m0_scalar = 0.0;
  double mu_min = 0.0;
  double theta = 0.0;
  std::vector<std::size_t> lattice_index;
  std::vector<Circuit> circuits;
  std::vector<RunRecord> records;
  NormalizationFit exact_fit;
  std::optional<NormalizationFit> sampled_fit;
};

Experiment prepare_experiment(const DilatedRun& run, int n_points, int initial);

/// Draws shots at every point with seeds derived from base_seed and fills
/// the sampled fields; the sampled fit replaces any previous one.
void sample_experiment(Experiment& e, std::uint64_t shots, std::uint64_t base_seed);

/// One-sigma multinomial spread of n * (k m0 + m1) for populations p.
double invariant_sigma(double k, double n, const PopPair& p, std::uint64_t shots);

}  // namespace nhsim
