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
#include "nhsim/analysis.hpp"

#include <cmath>

#include "nhsim/errors.hpp"
#include "nhsim/propagator.hpp"

namespace nhsim {

PopPair theory_probs(const ModelParams& p, double t0, double t, int initial, double max_dt) {
  if (initial != 0 && initial != 1) throw Error(ErrorKind::InvalidInput, "initial must be 0 or 1");
  if (!(t >= t0)) throw Error(ErrorKind::Precondition, "theory_probs: t must be >= t0");
  if (t == t0) return initial == 0 ? PopPair{1.0, 0.0} : PopPair{0.0, 1.0};
  PropagatorSpec<2> spec;
  spec.generator = [p](double s) { return hamiltonian(s, p); };
  spec.t0 = t0;
  spec.t1 = t;
  spec.hbar = p.hbar;
  spec.n_steps = std::max(1, static_cast<int>(std::ceil((t - t0) / max_dt)));
  const CMatrix2 u = evolve<2>(spec);
  return {std::norm(u(0, initial)), std::norm(u(1, initial))};
}

CMatrix4 preparation(double theta, int initial) {
  if (initial != 0 && initial != 1) throw Error(ErrorKind::InvalidInput, "initial must be 0 or 1");
  return kron(ry(theta), initial == 0 ? pauli::identity() : pauli::x());
}

Circuit build_point_circuit(const DilationContext& ctx, const CMatrix4& u_aq, int initial) {
  Circuit c = kak_decompose(u_aq * preparation(ancilla_theta(ctx), initial));
  c.measured = true;
  return c;
}

PopPair postselect(const ShotCounts& counts) {
  if (counts.shots == 0) throw Error(ErrorKind::Precondition, "postselect: no shots");
  const double n = static_cast<double>(counts.shots);
  return {counts.counts[0] / n, counts.counts[1] / n};
}

NormalizationFit fit_normalization(const std::vector<PopPair>& measured,
                                   const std::vector<PopPair>& predicted, FitMethod method) {
  if (measured.size() != predicted.size() || measured.empty())
    throw Error(ErrorKind::InvalidInput, "fit_normalization: series must be non-empty and aligned");
  NormalizationFit fit;
  fit.n_points = static_cast<int>(measured.size());
  if (method == FitMethod::LeastSquares) {
    double mp = 0.0, mm = 0.0;
    for (std::size_t i = 0; i < measured.size(); ++i)
      for (int c = 0; c < 2; ++c) {
        mp += measured[i][c] * predicted[i][c];
        mm += measured[i][c] * measured[i][c];
      }
    if (mm == 0.0) throw Error(ErrorKind::DegenerateFit, "fit_normalization: all measured values are zero");
    fit.n_k = mp / mm;
  } else {
    const double first = measured.front()[0] + measured.front()[1];
    if (first == 0.0)
      throw Error(ErrorKind::DegenerateFit, "fit_normalization: no population at the first point");
    fit.n_k = 1.0 / first;
  }
  for (std::size_t i = 0; i < measured.size(); ++i)
    for (int c = 0; c < 2; ++c) {
      const double r = fit.n_k * measured[i][c] - predicted[i][c];
      fit.residual += r * r;
    }
  return fit;
}

double invariant(double k, const PopPair& p) { return k * p[0] + p[1]; }

double invariant_sigma(double k, double n, const PopPair& p, std::uint64_t shots) {
  const double var = k * k * p[0] * (1.0 - p[0]) + p[1] * (1.0 - p[1]) - 2.0 * k * p[0] * p[1];
  return n * std::sqrt(std::max(var, 0.0) / static_cast<double>(shots));
}

DilatedRun propagate(const ModelParams& p, const DilationOptions& options) {
  DilationContext ctx(p, options);
  auto u_aq = dilated_propagators(ctx);
  auto u_q = qubit_propagators(ctx);
  return {std::move(ctx), std::move(u_aq), std::move(u_q)};
}

Experiment prepare_experiment(const DilatedRun& run, int n_points, int initial) {
  if (initial != 0 && initial != 1) throw Error(ErrorKind::InvalidInput, "initial must be 0 or 1");
  const std::size_t n_grid = run.ctx.grid().size();
  if (n_points < 2 || (n_grid - 1) % static_cast<std::size_t>(n_points - 1) != 0)
    throw Error(ErrorKind::Precondition,
                "prepare_experiment: output points must subdivide the lattice evenly");
  const std::size_t stride = (n_grid - 1) / static_cast<std::size_t>(n_points - 1);

  Experiment e;
  e.params = run.ctx.params();
  e.initial = initial;
  e.m0_scalar = run.ctx.m0_scalar();
  e.mu_min = run.ctx.mu_min();
  e.theta = ancilla_theta(run.ctx);
  const StateVector zero = basis_state(0);
  std::vector<PopPair> measured, predicted;
  for (int j = 0; j < n_points; ++j) {
    const std::size_t i = static_cast<std::size_t>(j) * stride;
    e.lattice_index.push_back(i);
    RunRecord r;
    r.t = run.ctx.grid()[i];
    r.theory = {std::norm(run.u_q[i](0, initial)), std::norm(run.u_q[i](1, initial))};
    e.circuits.push_back(build_point_circuit(run.ctx, run.u_aq[i], initial));
    r.circuit_raw = populations(run_exact(e.circuits.back(), zero));
    r.circuit_post = {r.circuit_raw[0], r.circuit_raw[1]};
    r.invariant_theory = invariant(e.params.k, r.theory);
    measured.push_back(r.circuit_post);
    predicted.push_back(r.theory);
    e.records.push_back(r);
  }
  e.exact_fit = fit_normalization(measured, predicted);
  for (auto& r : e.records) {
    r.circuit_norm = {e.exact_fit.n_k * r.circuit_post[0], e.exact_fit.n_k * r.circuit_post[1]};
    r.invariant_circuit = invariant(e.params.k, r.circuit_norm);
  }
  return e;
}

void sample_experiment(Experiment& e, std::uint64_t shots, std::uint64_t base_seed) {
  std::vector<PopPair> measured, predicted;
  for (std::size_t j = 0; j < e.records.size(); ++j) {
    RunRecord& r = e.records[j];
    Populations p = r.circuit_raw;
    const double total = p[0] + p[1] + p[2] + p[3];
    for (double& x : p) x /= total;
    r.counts = sample(p, shots, derive_seed(base_seed, j));
    r.sampled_raw = postselect(*r.counts);
    measured.push_back(r.sampled_raw);
    predicted.push_back(r.theory);
  }
  e.sampled_fit = fit_normalization(measured, predicted);
  for (auto& r : e.records) {
    r.sampled_norm = {e.sampled_fit->n_k * r.sampled_raw[0], e.sampled_fit->n_k * r.sampled_raw[1]};
    r.invariant_sampled = invariant(e.params.k, r.sampled_norm);
  }
}

}  // namespace nhsim
