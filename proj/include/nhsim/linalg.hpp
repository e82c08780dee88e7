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

// Dense complex linear algebra on fixed-size 2x2 and 4x4 Eigen matrices.

#include <Eigen/Dense>

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <numeric>
#include <string>

#include "nhsim/errors.hpp"

namespace nhsim {

using Complex = std::complex<double>;

template <int N>
using CMatrix = Eigen::Matrix<Complex, N, N>;
template <int N>
using CVector = Eigen::Matrix<Complex, N, 1>;

using CMatrix2 = CMatrix<2>;
using CMatrix4 = CMatrix<4>;
using CVector2 = CVector<2>;
using CVector4 = CVector<4>;

inline constexpr Complex kI{0.0, 1.0};

/// Hermitian eigendecomposition: ascending eigenvalues, unitary eigenvector
/// columns in matching order.
template <int N>
struct EigDecomp {
  Eigen::Matrix<double, N, 1> eigenvalues;
  CMatrix<N> eigenvectors;
};

namespace pauli {
inline CMatrix2 identity() { return CMatrix2::Identity(); }
inline CMatrix2 x() {
  CMatrix2 m;
  m << 0.0, 1.0, 1.0, 0.0;
  return m;
}
inline CMatrix2 y() {
  CMatrix2 m;
  m << 0.0, -kI, kI, 0.0;
  return m;
}
inline CMatrix2 z() {
  CMatrix2 m;
  m << 1.0, 0.0, 0.0, -1.0;
  return m;
}
}  // namespace pauli

template <typename Derived>
bool all_finite(const Eigen::MatrixBase<Derived>& a) {
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      if (!std::isfinite(a(i, j).real()) || !std::isfinite(a(i, j).imag())) return false;
  return true;
}

template <typename Derived>
double hermiticity_residual(const Eigen::MatrixBase<Derived>& a) {
  return (a - a.adjoint()).norm();
}

template <int N>
CMatrix<N> hermitian_part(const CMatrix<N>& a) {
  return (a + a.adjoint()) * 0.5;
}

/// Kronecker product with the first argument as the most significant factor.
inline CMatrix4 kron(const CMatrix2& a, const CMatrix2& b) {
  CMatrix4 out;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) out.block<2, 2>(2 * i, 2 * j) = a(i, j) * b;
  return out;
}

/// exp(s*A) by scaling and squaring around a fixed-order Taylor core.
template <int N>
CMatrix<N> matexp(const CMatrix<N>& a, Complex s = 1.0) {
  if (!all_finite(a) || !std::isfinite(s.real()) || !std::isfinite(s.imag()))
    throw Error(ErrorKind::InvalidInput, "matexp: non-finite input");
  constexpr int kOrder = 12;
  CMatrix<N> x = s * a;
  // 1-norm bound; the Taylor remainder at norm 1/4 and order 12 is below 3e-18.
  double norm = x.cwiseAbs().colwise().sum().maxCoeff();
  int squarings = 0;
  if (norm > 0.25) {
    squarings = static_cast<int>(std::ceil(std::log2(norm / 0.25)));
    x /= std::ldexp(1.0, squarings);
  }
  const CMatrix<N> id = CMatrix<N>::Identity();
  CMatrix<N> result = id;
  for (int k = kOrder; k >= 1; --k) result = id + (x * result) / static_cast<double>(k);
  for (int i = 0; i < squarings; ++i) result = result * result;
  return result;
}

namespace detail {

// One complex Jacobi rotation annihilating a(p,q). Accumulates into v.
template <int N>
void jacobi_rotate(CMatrix<N>& a, CMatrix<N>& v, int p, int q) {
  const Complex apq = a(p, q);
  const double mag = std::abs(apq);
  if (mag == 0.0) return;
  const Complex phase = apq / mag;
  const double app = a(p, p).real();
  const double aqq = a(q, q).real();
  const double tau = (aqq - app) / (2.0 * mag);
  const double t = (tau >= 0.0 ? 1.0 : -1.0) / (std::abs(tau) + std::sqrt(1.0 + tau * tau));
  const double c = 1.0 / std::sqrt(1.0 + t * t);
  const double sn = t * c;
  // R = D * J with D = diag(1, conj(phase)) on (p,q) and J the real rotation
  // [[c, sn], [-sn, c]]. Columns p and q of any right factor mix as below.
  const Complex rpp = c, rpq = sn;
  const Complex rqp = -sn * std::conj(phase), rqq = c * std::conj(phase);
  for (int i = 0; i < N; ++i) {
    const Complex aip = a(i, p), aiq = a(i, q);
    a(i, p) = aip * rpp + aiq * rqp;
    a(i, q) = aip * rpq + aiq * rqq;
    const Complex vip = v(i, p), viq = v(i, q);
    v(i, p) = vip * rpp + viq * rqp;
    v(i, q) = vip * rpq + viq * rqq;
  }
  for (int j = 0; j < N; ++j) {
    const Complex apj = a(p, j), aqj = a(q, j);
    a(p, j) = std::conj(rpp) * apj + std::conj(rqp) * aqj;
    a(q, j) = std::conj(rpq) * apj + std::conj(rqq) * aqj;
  }
  a(p, q) = 0.0;
  a(q, p) = 0.0;
  a(p, p) = a(p, p).real();
  a(q, q) = a(q, q).real();
}

}  // namespace detail

/// Hermitian eigendecomposition. 2x2 is a single closed-form rotation, larger
/// sizes run cyclic Jacobi sweeps until the off-diagonal mass is below 1e-14.
template <int N>
EigDecomp<N> herm_eig(const CMatrix<N>& a_in) {
  if (!all_finite(a_in)) throw Error(ErrorKind::InvalidInput, "herm_eig: non-finite input");
  const double scale = a_in.norm();
  if (hermiticity_residual(a_in) > 1e-10 * std::max(scale, 1e-300) && scale > 0.0)
    throw Error(ErrorKind::Precondition, "herm_eig: input is not Hermitian");
  CMatrix<N> a = hermitian_part<N>(a_in);
  CMatrix<N> v = CMatrix<N>::Identity();
  if constexpr (N == 2) {
    detail::jacobi_rotate<N>(a, v, 0, 1);
  } else {
    const double target = 1e-14 * std::max(scale, 1e-300);
    for (int sweep = 0; sweep < 60; ++sweep) {
      double off = 0.0;
      for (int p = 0; p < N; ++p)
        for (int q = p + 1; q < N; ++q) off += std::norm(a(p, q));
      if (std::sqrt(2.0 * off) <= target) break;
      for (int p = 0; p < N; ++p)
        for (int q = p + 1; q < N; ++q) detail::jacobi_rotate<N>(a, v, p, q);
    }
  }
  std::array<int, N> order;
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](int i, int j) { return a(i, i).real() < a(j, j).real(); });
  EigDecomp<N> out;
  for (int k = 0; k < N; ++k) {
    out.eigenvalues(k) = a(order[k], order[k]).real();
    out.eigenvectors.col(k) = v.col(order[k]);
  }
  return out;
}

/// Principal square root of a Hermitian positive semidefinite matrix.
template <int N>
CMatrix<N> psd_sqrt(const CMatrix<N>& a) {
  const auto eig = herm_eig<N>(a);
  const double lowest = eig.eigenvalues(0);
  if (lowest < -1e-12)
    throw PositivityViolation(lowest, "psd_sqrt: negative eigenvalue " + std::to_string(lowest));
  Eigen::Matrix<double, N, 1> roots = eig.eigenvalues.cwiseMax(0.0).cwiseSqrt();
  CMatrix<N> s = eig.eigenvectors * roots.template cast<Complex>().asDiagonal() *
                 eig.eigenvectors.adjoint();
  return hermitian_part<N>(s);
}

/// Solves P X + X P = R for Hermitian positive definite P and Hermitian R.
template <int N>
CMatrix<N> sylvester_sym(const CMatrix<N>& p, const CMatrix<N>& r) {
  const auto eig = herm_eig<N>(p);
  const CMatrix<N>& v = eig.eigenvectors;
  CMatrix<N> rt = v.adjoint() * r * v;
  for (int i = 0; i < N; ++i)
    for (int j = 0; j < N; ++j) {
      const double denom = eig.eigenvalues(i) + eig.eigenvalues(j);
      if (denom <= 1e-14)
        throw Error(ErrorKind::SingularPencil,
                    "sylvester_sym: eigenvalue sum " + std::to_string(denom) + " is not positive");
      rt(i, j) /= denom;
    }
  return hermitian_part<N>(v * rt * v.adjoint());
}

}  // namespace nhsim
