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

#include "nhsim/dilation.hpp"
#include "nhsim/errors.hpp"
#include "nhsim/propagator.hpp"

using namespace nhsim;

namespace {

ModelParams params(double k, double omega0 = 1.0) {
  ModelParams p;
  p.k = k;
  p.omega0 = omega0;
  return p;
}

DilationOptions coarse(int n_grid = 81, int substeps = 64) {
  DilationOptions o;
  o.n_grid = n_grid;
  o.substeps = substeps;
  return o;
}

CVector4 dilated_initial(double theta, const CVector2& psi) {
  const CVector2 anc = ry(theta).col(0);
  CVector4 s;
  s << anc(0) * psi, anc(1) * psi;
  return s;
}

}  // namespace

TEST_CASE("preconditions") {
  const auto expect_kind = [](const DilationOptions& o, ErrorKind kind) {
    try {
      build_context(params(0.5), o);
      FAIL("expected error");
    } catch (const Error& e) {
      CHECK(e.kind() == kind);
    }
  };
  DilationOptions o = coarse();
  o.n_grid = 1;
  expect_kind(o, ErrorKind::Precondition);
  o = coarse();
  o.t1 = o.t0;
  expect_kind(o, ErrorKind::Precondition);
  o = coarse();
  o.m0 = 1.0;
  expect_kind(o, ErrorKind::Calibration);
  o = coarse();
  o.f = 0.9;
  expect_kind(o, ErrorKind::Calibration);
  const auto ctx = build_context(params(0.5), coarse());
  CHECK_THROWS_AS(m_of_t(ctx, 20.5), Error);
  CHECK_THROWS_AS(m_of_t(ctx, -21.0), Error);
}

TEST_CASE("hermitian reduction") {
  const auto ctx = build_context(params(1.0), coarse());
  CHECK(ctx.mu_min() == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(ctx.m0_scalar() == doctest::Approx(1.1).epsilon(1e-12));
  CHECK(ancilla_theta(ctx) == doctest::Approx(2.0 * std::atan(std::sqrt(0.1))).epsilon(1e-12));
  CHECK(ancilla_theta(ctx) == doctest::Approx(0.612555).epsilon(1e-6));
  for (double t : {-20.0, -3.3, 0.0, 0.77, 20.0}) {
    CHECK((m_of_t(ctx, t) - 1.1 * CMatrix2::Identity()).norm() < 1e-12);
    const auto e = eta_and_derivative(ctx, t);
    CHECK(e.deta.norm() < 1e-10);
    const auto lg = lambda_gamma(ctx, t);
    CHECK(lg.gamma.norm() < 1e-10);
    CHECK((lg.lambda - hamiltonian(t, ctx.params())).norm() < 1e-10);
  }
  const CMatrix4 h0 = h_aq(ctx, 0.0);
  CHECK((h0 - kron(CMatrix2::Identity(), 0.5 * pauli::x())).norm() < 1e-10);

  const auto u_aq = dilated_propagators(ctx);
  const auto u_q = qubit_propagators(ctx);
  const CVector4 s0 = dilated_initial(ancilla_theta(ctx), CVector2(1.0, 0.0));
  for (std::size_t i = 0; i < u_aq.size(); ++i) {
    const CVector4 s = u_aq[i] * s0;
    CHECK(s.head<2>().squaredNorm() == doctest::Approx(1.0 / 1.1).epsilon(1e-9));
    CHECK((u_q[i].adjoint() * u_q[i] - CMatrix2::Identity()).norm() < 1e-10);
  }
}

TEST_CASE("decoupled limit") {
  const auto ctx = build_context(params(0.5, 0.0), coarse(11, 8));
  for (double t : {-7.0, 0.0, 13.0}) {
    const auto lg = lambda_gamma(ctx, t);
    CHECK(lg.gamma.norm() < 1e-12);
    CHECK((lg.lambda - hamiltonian(t, ctx.params())).norm() < 1e-12);
  }
}

TEST_CASE("assembly and ancilla rotation") {
  CMatrix4 expect = CMatrix4::Zero();
  expect.diagonal() << 1.0, -1.0, 1.0, -1.0;
  CHECK((assemble_h_aq(pauli::z(), CMatrix2::Zero()) - expect).norm() == 0.0);
  const CMatrix2 g = 0.3 * pauli::x() + 0.1 * pauli::z();
  const CMatrix4 full = assemble_h_aq(pauli::z(), g);
  CHECK((full - kron(CMatrix2::Identity(), pauli::z()) - kron(pauli::y(), g)).norm() == 0.0);
  CHECK((ry(0.4) - matexp<2>(pauli::y(), Complex(0.0, -0.2))).norm() < 1e-15);
  // theta = pi/2 when M0 = 2; here via the formula directly.
  CHECK(2.0 * std::atan(std::sqrt(2.0 - 1.0)) == doctest::Approx(std::acos(-1.0) / 2));
}

TEST_CASE("calibration sharpness and metric") {
  for (double k : {0.5, 2.0, -1.0}) {
    const auto ctx = build_context(params(k), coarse(801, 16));
    double min_eig = 1e300;
    for (double t : ctx.grid()) {
      const CMatrix2 m = m_of_t(ctx, t);
      CHECK(hermiticity_residual(m) == 0.0);
      min_eig = std::min(min_eig, herm_eig<2>(CMatrix2(m - CMatrix2::Identity())).eigenvalues(0));
    }
    CHECK(std::abs(min_eig - (ctx.options().f - 1.0)) < 1e-8);
    CHECK((m_of_t(ctx, ctx.t0()) - ctx.m0_scalar() * CMatrix2::Identity()).norm() < 1e-14);
    const auto e0 = eta_and_derivative(ctx, ctx.t0());
    CHECK((e0.eta - std::sqrt(ctx.m0_scalar() - 1.0) * CMatrix2::Identity()).norm() < 1e-12);
  }
}

TEST_CASE("metric step halving") {
  const auto a = build_context(params(0.5), coarse(801, 256));
  const auto b = build_context(params(0.5), coarse(801, 512));
  for (double t : {-11.1, 0.0, 0.123, 20.0})
    CHECK((m_of_t(a, t) - m_of_t(b, t)).norm() < 1e-8);
}

TEST_CASE("eta derivative against finite differences") {
  const auto ctx = build_context(params(0.5), coarse(801, 256));
  for (double t : {-5.0, 0.0, 2.5}) {
    const double h = 1e-5;
    const CMatrix2 fd = (eta_and_derivative(ctx, t + h).eta - eta_and_derivative(ctx, t - h).eta) / (2 * h);
    const auto e = eta_and_derivative(ctx, t);
    CHECK((e.deta - fd).norm() < 1e-6);
    CHECK((e.eta * e.eta - (m_of_t(ctx, t) - CMatrix2::Identity())).norm() < 1e-10);
  }
}

TEST_CASE("lambda and gamma hermiticity") {
  for (int substeps : {4, 64}) {
    const auto ctx = build_context(params(0.5), coarse(81, substeps));
    for (double t : ctx.grid()) {
      const auto ops = dilated_operators(ctx, t);
      CHECK(ops.lambda_residual < 1e-9);
      CHECK(ops.gamma_residual < 1e-9);
      CHECK(hermiticity_residual(ops.h_aq) < 1e-12);
      CHECK((ops.h_aq - assemble_h_aq(ops.lambda, ops.gamma)).norm() == 0.0);
    }
  }
}

TEST_CASE("block evaluation matches the direct 4x4 product") {
  DilationOptions o = coarse(5, 8);
  o.t0 = -4.0;
  o.t1 = 4.0;
  const auto ctx = build_context(params(0.5), o);
  const auto u_blocks = dilated_propagators(ctx);
  PropagatorSpec<4> spec;
  spec.generator = [&ctx](double t) { return h_aq(ctx, t); };
  spec.t0 = ctx.t0();
  spec.t1 = ctx.t1();
  spec.n_steps = 4 * 8;
  CHECK((evolve<4>(spec) - u_blocks.back()).norm() < 1e-10);
  CHECK((u_blocks.back().adjoint() * u_blocks.back() - CMatrix4::Identity()).norm() < 1e-12);
}

TEST_CASE("dilation identity") {
  for (double k : {0.5, 2.0, -1.0}) {
    // k = -1 has the steepest metric; give it a finer substep count.
    const auto ctx = build_context(params(k), coarse(161, k < 0 ? 256 : 64));
    const auto u_aq = dilated_propagators(ctx);
    const auto u_q = qubit_propagators(ctx);
    for (const CVector2& psi : {CVector2(1.0, 0.0), CVector2(0.0, 1.0)}) {
      const CVector4 s0 = dilated_initial(ancilla_theta(ctx), psi);
      for (std::size_t i = 0; i < u_aq.size(); i += 4) {
        const CVector4 s = u_aq[i] * s0;
        const CVector2 direct = u_q[i] * psi;
        const CVector2 a0 = s.head<2>(), a1 = s.tail<2>();
        CHECK(colinearity_residual<2>(a0, direct) < 1e-5);
        // Ancilla-1 block is eta(t) times the same vector with the same constant.
        const Complex c = direct.dot(a0) / direct.squaredNorm();
        const CMatrix2 eta = eta_and_derivative(ctx, ctx.grid()[i]).eta;
        CHECK((a1 - c * eta * direct).norm() < 1e-4 * a1.norm() + 1e-12);
        // At t0 the shared constant is 1/sqrt(M0).
        if (i == 0) CHECK(std::abs(c - 1.0 / std::sqrt(ctx.m0_scalar())) < 1e-12);
      }
    }
  }
}

TEST_CASE("gamma sign fault breaks the identity") {
  DilationOptions o = coarse(81, 32);
  o.gamma_commutator_sign = -1.0;
  const auto ctx = build_context(params(0.5), o);
  const auto u_aq = dilated_propagators(ctx);
  const auto u_q = qubit_propagators(ctx);
  const CVector4 s0 = dilated_initial(ancilla_theta(ctx), CVector2(1.0, 0.0));
  double worst = 0.0;
  for (std::size_t i = 0; i < u_aq.size(); ++i)
    worst = std::max(worst, colinearity_residual<2>(CVector2((u_aq[i] * s0).head<2>()),
                                                    CVector2(u_q[i] * CVector2(1.0, 0.0))));
  CHECK(worst > 1e-2);
}
