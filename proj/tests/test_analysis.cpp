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
#include <doctest.h>

#include <cmath>
#include <random>

#include "nhsim/analysis.hpp"
#include "nhsim/errors.hpp"

using namespace nhsim;

namespace {

ModelParams params(double k) {
  ModelParams p;
  p.k = k;
  return p;
}

DilationOptions small_options(int n_points, int refinement, int substeps) {
  DilationOptions o;
  o.n_grid = (n_points - 1) * refinement + 1;
  o.substeps = substeps;
  return o;
}

}  // namespace

TEST_CASE("theory probabilities") {
  const PopPair start = theory_probs(params(0.5), -20.0, -20.0, 0);
  CHECK(start[0] == 1.0);
  CHECK(start[1] == 0.0);
  const PopPair start1 = theory_probs(params(0.5), -20.0, -20.0, 1);
  CHECK(start1[1] == 1.0);
  for (double t : {-10.0, 0.0, 20.0}) {
    const PopPair h = theory_probs(params(1.0), -20.0, t, 0);
    CHECK(h[0] + h[1] == doctest::Approx(1.0).epsilon(1e-9));
    const PopPair nh = theory_probs(params(0.5), -20.0, t, 0);
    CHECK(std::abs(invariant(0.5, nh) - 0.5) < 1e-7);
    const PopPair nh1 = theory_probs(params(2.0), -20.0, t, 1);
    CHECK(std::abs(invariant(2.0, nh1) - 1.0) < 1e-7);
  }
  CHECK_THROWS_AS(theory_probs(params(0.5), 0.0, -1.0, 0), Error);
  CHECK_THROWS_AS(theory_probs(params(0.5), 0.0, 1.0, 2), Error);
}

TEST_CASE("postselection") {
  ShotCounts c;
  c.counts = {5000, 3000, 1500, 500};
  c.shots = 10000;
  const PopPair p = postselect(c);
  CHECK(p[0] == 0.5);
  CHECK(p[1] == 0.3);
  ShotCounts e;
  e.counts = {0, 0, 10000, 0};
  e.shots = 10000;
  CHECK(postselect(e) == PopPair{0.0, 0.0});
  e.shots = 0;
  CHECK_THROWS_AS(postselect(e), Error);
}

TEST_CASE("normalization fit") {
  const std::vector<PopPair> pred{{0.9, 0.1}, {0.5, 0.25}, {0.2, 0.4}};
  std::vector<PopPair> half;
  for (const auto& p : pred) half.push_back({p[0] / 2, p[1] / 2});
  const NormalizationFit f = fit_normalization(half, pred);
  CHECK(f.n_k == doctest::Approx(2.0));
  CHECK(f.residual < 1e-30);
  CHECK(f.n_points == 3);
  CHECK(fit_normalization(pred, pred).n_k == doctest::Approx(1.0));
  const NormalizationFit t0 = fit_normalization(half, pred, FitMethod::InitialPopulation);
  CHECK(t0.n_k == doctest::Approx(2.0));

  std::vector<PopPair> zero(3, PopPair{0.0, 0.0});
  try {
    fit_normalization(zero, pred);
    FAIL("expected degenerate fit");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::DegenerateFit);
  }

  // Monte Carlo: noise on the measured side around m = p / n*.
  const double n_star = 1.7, sigma = 0.01;
  std::vector<PopPair> big_pred;
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> u(0.05, 0.9);
  for (int i = 0; i < 81; ++i) big_pred.push_back({u(rng), u(rng)});
  double mm = 0.0;
  for (const auto& p : big_pred) mm += (p[0] * p[0] + p[1] * p[1]) / (n_star * n_star);
  // Linearised estimator spread for n = sum(m p) / sum(m^2) with m noisy.
  double grad2 = 0.0;
  for (const auto& p : big_pred)
    for (int c = 0; c < 2; ++c) {
      const double m = p[c] / n_star;
      const double d = (p[c] - 2.0 * n_star * m) / mm;
      grad2 += d * d;
    }
  const double sd = sigma * std::sqrt(grad2);
  std::normal_distribution<double> noise(0.0, sigma);
  int within = 0;
  const int trials = 400;
  double mean = 0.0;
  for (int trial = 0; trial < trials; ++trial) {
    std::vector<PopPair> meas;
    for (const auto& p : big_pred) meas.push_back({p[0] / n_star + noise(rng), p[1] / n_star + noise(rng)});
    const double n = fit_normalization(meas, big_pred).n_k;
    mean += n / trials;
    within += std::abs(n - n_star) < 3.0 * sd;
  }
  CHECK(within >= trials * 0.98);
  // Noise in the denominator biases the estimator towards n* mm / (mm + N sigma^2).
  const double biased = n_star * mm / (mm + 2.0 * big_pred.size() * sigma * sigma);
  CHECK(std::abs(mean - biased) < 4.0 * sd / std::sqrt(trials));
}

TEST_CASE("point circuit at t0") {
  DilationOptions o = small_options(5, 2, 16);
  o.f = 2.0;
  const DilatedRun run = propagate(params(1.0), o);
  CHECK(run.ctx.m0_scalar() == doctest::Approx(2.0));
  const Circuit c = build_point_circuit(run.ctx, run.u_aq.front(), 0);
  CHECK(c.cnot_count() == 0);
  CHECK(c.measured);
  const Populations p = populations(run_exact(c, basis_state(0)));
  CHECK(p[0] == doctest::Approx(0.5));
  CHECK(p[1] < 1e-20);
  CHECK(p[2] == doctest::Approx(0.5));
  CHECK(p[3] < 1e-20);
  CHECK(build_point_circuit(run.ctx, run.u_aq.front(), 1).cnot_count() == 0);
}

TEST_CASE("pipeline in the hermitian limit") {
  const DilatedRun run = propagate(params(1.0), small_options(21, 4, 32));
  const Experiment e = prepare_experiment(run, 21, 0);
  CHECK(e.exact_fit.n_k == doctest::Approx(1.1).epsilon(1e-9));
  for (std::size_t j = 0; j < e.records.size(); ++j) {
    const auto& r = e.records[j];
    CHECK(r.circuit_post[0] + r.circuit_post[1] == doctest::Approx(1.0 / 1.1).epsilon(1e-9));
    CHECK(r.theory[0] + r.theory[1] == doctest::Approx(1.0).epsilon(1e-9));
    // Matrix path oracle.
    const CVector4 direct = run.u_aq[e.lattice_index[j]] * preparation(e.theta, 0).col(0);
    CHECK((run_exact(e.circuits[j], basis_state(0)) - direct).norm() < 1e-8);
  }
  CHECK_THROWS_AS(prepare_experiment(run, 8, 0), Error);
}

TEST_CASE("pipeline exact and sampled modes") {
  for (int initial : {0, 1}) {
    const DilatedRun run = propagate(params(0.5), small_options(41, 4, 128));
    Experiment e = prepare_experiment(run, 41, initial);
    const double expected = initial == 0 ? 0.5 : 1.0;
    CHECK(e.exact_fit.n_k == doctest::Approx(run.ctx.m0_scalar()).epsilon(1e-6));
    for (const auto& r : e.records) {
      CHECK(std::abs(r.invariant_theory - expected) < 1e-7);
      CHECK(std::abs(r.invariant_circuit - expected) < 1e-6);
      CHECK(std::abs(r.circuit_norm[0] - r.theory[0]) < 1e-6);
      CHECK(std::abs(r.circuit_norm[1] - r.theory[1]) < 1e-6);
    }
    sample_experiment(e, 10000, 99);
    REQUIRE(e.sampled_fit.has_value());
    int within = 0;
    for (const auto& r : e.records) {
      REQUIRE(r.counts.has_value());
      // Exact-mode populations vs sampled raw within 4 binomial sigma.
      for (int c = 0; c < 2; ++c) {
        const double p = r.circuit_post[c];
        const double s = std::sqrt(p * (1 - p) / 10000.0);
        within += std::abs(r.sampled_raw[c] - p) <= 4.0 * s + 1e-15;
      }
    }
    CHECK(within >= static_cast<int>(0.99 * 2 * e.records.size()));
    // Same seed reproduces identical counts.
    Experiment again = prepare_experiment(run, 41, initial);
    sample_experiment(again, 10000, 99);
    for (std::size_t j = 0; j < e.records.size(); ++j)
      CHECK(e.records[j].counts->counts == again.records[j].counts->counts);
  }
}
