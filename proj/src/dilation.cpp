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

#include "nhsim/dilation.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace nhsim {
namespace {

// One midpoint step of dG/dt = -(i/hbar) H^dagger G from t to t + h.
CMatrix2 step_g(const CMatrix2& g, double t, double h, const ModelParams& p) {
  const double tm = t + 0.5 * h;
  return matexp<2>(hamiltonian(tm, p).adjoint(), Complex(0.0, -h / p.hbar)) * g;
}

void check_finite(const CMatrix2& g, double t) {
  if (!all_finite(g))
    throw IntegrationFailure(t, "dilation: non-finite propagator at t = " + std::to_string(t));
}

}  // namespace

DilationContext::DilationContext(const ModelParams& params, const DilationOptions& options)
    : params_(params), options_(options) {
  params_.validate();
  if (!(options.t0 < options.t1))
    throw Error(ErrorKind::Precondition, "build_context: t0 must be < t1");
  if (options.n_grid < 2) throw Error(ErrorKind::Precondition, "build_context: n_grid must be >= 2");
  if (options.substeps < 1)
    throw Error(ErrorKind::Precondition, "build_context: substeps must be >= 1");
  if (!(options.m0 > 1.0) || !(options.f > 1.0))
    throw Error(ErrorKind::Calibration, "build_context: m0 and f must both exceed 1");

  const int n = options.n_grid;
  grid_.resize(n);
  const double span = options.t1 - options.t0;
  for (int i = 0; i < n; ++i) grid_[i] = options.t0 + span * static_cast<double>(i) / (n - 1);
  grid_.back() = options.t1;

  g_cache_.reserve(n);
  g_cache_.push_back(CMatrix2::Identity());
  mu_min_ = options.m0;
  for (int i = 0; i + 1 < n; ++i) {
    CMatrix2 g = g_cache_.back();
    const double hs = half_step(i);
    for (int s = 0; s < 2 * options.substeps; ++s) g = step_g(g, grid_[i] + s * hs, hs, params_);
    check_finite(g, grid_[i + 1]);
    g_cache_.push_back(g);
    const CMatrix2 trial = options.m0 * g * g.adjoint();
    mu_min_ = std::min(mu_min_, herm_eig<2>(hermitian_part<2>(trial)).eigenvalues(0));
  }
  if (!(mu_min_ > 0.0) || !std::isfinite(mu_min_))
    throw Error(ErrorKind::IntegrationFailure, "build_context: degenerate propagator spectrum");
  m0_scalar_ = options.m0 / mu_min_ * options.f;
}

double DilationContext::half_step(std::size_t interval) const {
  return (grid_[interval + 1] - grid_[interval]) / (2.0 * options_.substeps);
}

CMatrix2 DilationContext::g_of_t(double t) const {
  const double slack = 1e-12 * (std::abs(t0()) + std::abs(t1()) + 1.0);
  if (!(t >= t0() - slack && t <= t1() + slack))
    throw Error(ErrorKind::Domain, "t = " + std::to_string(t) + " is outside the context window");
  t = std::clamp(t, t0(), t1());
  auto it = std::upper_bound(grid_.begin(), grid_.end(), t);
  std::size_t i = static_cast<std::size_t>(std::max<std::ptrdiff_t>(0, (it - grid_.begin()) - 1));
  i = std::min(i, grid_.size() - 2);
  CMatrix2 g = g_cache_[i];
  const double hs = half_step(i);
  const int full = static_cast<int>(std::floor((t - grid_[i]) / hs));
  for (int s = 0; s < full; ++s) g = step_g(g, grid_[i] + s * hs, hs, params_);
  const double rest = t - (grid_[i] + full * hs);
  if (rest > 0.0) g = step_g(g, grid_[i] + full * hs, rest, params_);
  return g;
}

DilationContext build_context(const ModelParams& p, const DilationOptions& options) {
  return DilationContext(p, options);
}

DilationContext build_context(const ModelParams& p, double t0, double t1, int n_grid, double m0,
                              double f) {
  DilationOptions o;
  o.t0 = t0;
  o.t1 = t1;
  o.n_grid = n_grid;
  o.m0 = m0;
  o.f = f;
  return DilationContext(p, o);
}

CMatrix2 m_of_t(const DilationContext& ctx, double t) {
  const CMatrix2 g = ctx.g_of_t(t);
  return hermitian_part<2>(ctx.m0_scalar() * g * g.adjoint());
}

CMatrix2 m_derivative(const CMatrix2& h, const CMatrix2& m, double hbar) {
  return hermitian_part<2>(Complex(0.0, -1.0 / hbar) * (h.adjoint() * m - m * h));
}

DilatedOperators dilated_operators(const CMatrix2& h, const CMatrix2& m, double hbar,
                                   double gamma_commutator_sign) {
  DilatedOperators out;
  out.m = m;
  const CMatrix2 id = CMatrix2::Identity();
  out.eta = psd_sqrt<2>(CMatrix2(m - id));
  out.deta = sylvester_sym<2>(out.eta, m_derivative(h, m, hbar));
  const CMatrix2 m_inv = m.inverse();
  const CMatrix2& eta = out.eta;
  const CMatrix2 lambda =
      (h + kI * hbar * out.deta * eta + eta * h * eta) * m_inv;
  const CMatrix2 gamma =
      kI * (gamma_commutator_sign * (h * eta - eta * h) - kI * hbar * out.deta) * m_inv;
  out.lambda_residual = hermiticity_residual(lambda);
  out.gamma_residual = hermiticity_residual(gamma);
  const auto guard = [](double residual, const CMatrix2& a, const char* name) {
    if (residual > 1e-6 * a.norm() + 1e-13)
      throw Error(ErrorKind::DilationConsistency,
                  std::string("dilation: ") + name + " Hermiticity residual " +
                      std::to_string(residual));
  };
  if (gamma_commutator_sign == 1.0) {
    guard(out.lambda_residual, lambda, "Lambda");
    guard(out.gamma_residual, gamma, "Gamma");
  }
  out.lambda = hermitian_part<2>(lambda);
  out.gamma = hermitian_part<2>(gamma);
  out.h_aq = assemble_h_aq(out.lambda, out.gamma);
  return out;
}

DilatedOperators dilated_operators(const DilationContext& ctx, double t) {
  return dilated_operators(hamiltonian(t, ctx.params()), m_of_t(ctx, t), ctx.params().hbar,
                           ctx.options().gamma_commutator_sign);
}

EtaPair eta_and_derivative(const DilationContext& ctx, double t) {
  const CMatrix2 m = m_of_t(ctx, t);
  EtaPair out;
  out.eta = psd_sqrt<2>(CMatrix2(m - CMatrix2::Identity()));
  out.deta = sylvester_sym<2>(out.eta, m_derivative(hamiltonian(t, ctx.params()), m,
                                                    ctx.params().hbar));
  return out;
}

LambdaGamma lambda_gamma(const DilationContext& ctx, double t) {
  const auto ops = dilated_operators(ctx, t);
  return {ops.lambda, ops.gamma, ops.lambda_residual, ops.gamma_residual};
}

CMatrix4 assemble_h_aq(const CMatrix2& lambda, const CMatrix2& gamma) {
  return kron(CMatrix2::Identity(), lambda) + kron(pauli::y(), gamma);
}

CMatrix4 h_aq(const DilationContext& ctx, double t) { return dilated_operators(ctx, t).h_aq; }

double ancilla_theta(const DilationContext& ctx) {
  return 2.0 * std::atan(std::sqrt(ctx.m0_scalar() - 1.0));
}

CMatrix2 ry(double theta) {
  const double c = std::cos(0.5 * theta), s = std::sin(0.5 * theta);
  CMatrix2 r;
  r << c, -s, s, c;
  return r;
}

std::vector<CMatrix4> dilated_propagators(const DilationContext& ctx) {
  const auto& grid = ctx.grid();
  const auto& p = ctx.params();
  const int sub = ctx.options().substeps;
  // In the sigma_y eigenbasis of the ancilla H_aq = diag(Lambda + Gamma,
  // Lambda - Gamma), so each midpoint factor splits into two 2x2 exponentials.
  CMatrix2 w;
  w << 1.0, 1.0, kI, -kI;
  w /= std::sqrt(2.0);
  const CMatrix4 to_y = kron(w, CMatrix2::Identity());
  std::vector<CMatrix4> out;
  out.reserve(grid.size());
  CMatrix2 u_plus = CMatrix2::Identity();
  CMatrix2 u_minus = CMatrix2::Identity();
  out.push_back(CMatrix4::Identity());
  for (std::size_t i = 0; i + 1 < grid.size(); ++i) {
    const double hs = ctx.half_step(i);
    const Complex factor(0.0, -2.0 * hs / p.hbar);
    CMatrix2 g = ctx.g_cache()[i];
    for (int j = 0; j < sub; ++j) {
      const double a = grid[i] + (2 * j) * hs;
      const double tm = grid[i] + (2 * j + 1) * hs;
      g = step_g(g, a, hs, p);
      const CMatrix2 m = hermitian_part<2>(ctx.m0_scalar() * g * g.adjoint());
      const auto ops = dilated_operators(hamiltonian(tm, p), m, p.hbar,
                                         ctx.options().gamma_commutator_sign);
      u_plus = matexp<2>(CMatrix2(ops.lambda + ops.gamma), factor) * u_plus;
      u_minus = matexp<2>(CMatrix2(ops.lambda - ops.gamma), factor) * u_minus;
      g = step_g(g, tm, hs, p);
    }
    CMatrix4 block = CMatrix4::Zero();
    block.topLeftCorner<2, 2>() = u_plus;
    block.bottomRightCorner<2, 2>() = u_minus;
    const CMatrix4 u = to_y * block * to_y.adjoint();
    if (!all_finite(u))
      throw IntegrationFailure(grid[i + 1], "dilated propagator became non-finite");
    out.push_back(u);
  }
  return out;
}

std::vector<CMatrix2> qubit_propagators(const DilationContext& ctx) {
  const auto& grid = ctx.grid();
  const auto& p = ctx.params();
  const int sub = ctx.options().substeps;
  std::vector<CMatrix2> out;
  out.reserve(grid.size());
  CMatrix2 u = CMatrix2::Identity();
  out.push_back(u);
  for (std::size_t i = 0; i + 1 < grid.size(); ++i) {
    const double hs = ctx.half_step(i);
    for (int j = 0; j < sub; ++j) {
      const double tm = grid[i] + (2 * j + 1) * hs;
      u = matexp<2>(hamiltonian(tm, p), Complex(0.0, -2.0 * hs / p.hbar)) * u;
    }
    check_finite(u, grid[i + 1]);
    out.push_back(u);
  }
  return out;
}

}  // namespace nhsim
