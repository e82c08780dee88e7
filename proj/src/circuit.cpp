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

#include "nhsim/circuit.hpp"

#include <charconv>
#include <cmath>
#include <numbers>
#include <sstream>
#include <utility>

namespace nhsim {
namespace {

constexpr double kPi = std::numbers::pi;

// Canonical coefficients this close to zero (or to +-pi/4 for the CNOT class)
// are snapped when choosing the CNOT count.
constexpr double kClassTol = 1e-10;

double wrap_angle(double a) {
  a = std::remainder(a, 2.0 * kPi);  // [-pi, pi]
  if (a <= -kPi) a += 2.0 * kPi;
  return a;
}

using LocalPair = std::pair<CMatrix2, CMatrix2>;  // (qubit 1, qubit 0)

LocalPair operator*(const LocalPair& l, const LocalPair& r) {
  return {l.first * r.first, l.second * r.second};
}

LocalPair adjoint(const LocalPair& l) { return {l.first.adjoint(), l.second.adjoint()}; }

CMatrix2 exp_pauli(const CMatrix2& p, double angle) {  // exp(i angle P)
  return std::cos(angle) * CMatrix2::Identity() + kI * std::sin(angle) * p;
}

CMatrix2 hadamard() {
  CMatrix2 h;
  h << 1.0, 1.0, 1.0, -1.0;
  return h / std::sqrt(2.0);
}

CMatrix2 s_gate() {
  CMatrix2 s = CMatrix2::Identity();
  s(1, 1) = kI;
  return s;
}

CMatrix4 cnot_matrix(int control, int target) {
  CMatrix4 m = CMatrix4::Zero();
  for (int col = 0; col < 4; ++col) {
    const int bit_c = (col >> control) & 1;
    const int row = bit_c ? col ^ (1 << target) : col;
    m(row, col) = 1.0;
  }
  return m;
}

// Canonical gate as layers around CNOT(1 -> 0): U = phase * L_n C ... C L_0.
struct Layered {
  std::vector<LocalPair> layers;
  Complex phase{1.0, 0.0};
};

LocalPair identity_pair() { return {CMatrix2::Identity(), CMatrix2::Identity()}; }

// Local Clifford conjugations permuting the XX, YY, ZZ axes.
// (V (x) V)^dag ZZ (V (x) V) = YY with V = exp(-i pi/4 X)
// (W (x) W)^dag XX (W (x) W) = YY with W = exp(-i pi/4 Z)
// (R (x) R)^dag XX (R (x) R) = ZZ with R = exp(-i pi/4 Y)
LocalPair swap_yz() {
  const CMatrix2 v = exp_pauli(pauli::x(), -kPi / 4);
  return {v, v};
}
LocalPair swap_xy() {
  const CMatrix2 w = exp_pauli(pauli::z(), -kPi / 4);
  return {w, w};
}
LocalPair swap_xz() {
  const CMatrix2 r = exp_pauli(pauli::y(), -kPi / 4);
  return {r, r};
}

// Conjugation by q: Can(c) = q^dag Can(c') q.
void conjugate(Layered& l, const LocalPair& q) {
  l.layers.front() = l.layers.front() * q;
  l.layers.back() = adjoint(q) * l.layers.back();
}

Layered three_cnot(double a, double b, double c) {
  const CMatrix2 id = CMatrix2::Identity();
  CMatrix2 d = id;
  d(1, 1) = -kI;
  const CMatrix2 h = hadamard(), s = s_gate();
  Layered out;
  out.layers = {
      identity_pair(),
      {exp_pauli(pauli::x(), a), h * exp_pauli(pauli::z(), c)},
      {exp_pauli(pauli::x(), -b), s.adjoint() * h},
      {d, s},
  };
  return out;
}

// Can(a, 0, c).
Layered two_cnot(double a, double c) {
  Layered out;
  out.layers = {identity_pair(),
                {exp_pauli(pauli::x(), a), exp_pauli(pauli::z(), c)},
                identity_pair()};
  return out;
}

// Can(+-pi/4, 0, 0).
Layered one_cnot(double sign) {
  const CMatrix2 h = hadamard();
  Layered out;
  out.layers = {{h, CMatrix2::Identity()},
                {h * exp_pauli(pauli::z(), kPi / 4), exp_pauli(pauli::x(), kPi / 4)}};
  out.phase = std::exp(Complex(0.0, -kPi / 4));
  if (sign < 0) conjugate(out, {pauli::z(), CMatrix2::Identity()});
  return out;
}

Layered zero_cnot() {
  Layered out;
  out.layers = {identity_pair()};
  return out;
}

Layered canonical_layers(const std::array<double, 3>& c, int n_cx) {
  const auto is_zero = [](double x) { return std::abs(x) < kClassTol; };
  switch (n_cx) {
    case 0:
      return zero_cnot();
    case 1: {
      if (!is_zero(c[0])) return one_cnot(c[0] > 0 ? 1.0 : -1.0);
      if (!is_zero(c[1])) {
        Layered l = one_cnot(c[1] > 0 ? 1.0 : -1.0);
        conjugate(l, swap_xy());
        return l;
      }
      Layered l = one_cnot(c[2] > 0 ? 1.0 : -1.0);
      conjugate(l, swap_xz());
      return l;
    }
    case 2: {
      if (is_zero(c[1])) return two_cnot(c[0], c[2]);
      if (is_zero(c[2])) {
        Layered l = two_cnot(c[0], c[1]);
        conjugate(l, swap_yz());
        return l;
      }
      Layered l = two_cnot(c[1], c[2]);
      conjugate(l, swap_xy());
      return l;
    }
    default:
      return three_cnot(c[0], c[1], c[2]);
  }
}

// Splits a local 4x4 into a (x) b. The input must be (numerically) a product.
LocalPair kron_factor(const CMatrix4& l) {
  int bi = 0, bk = 0;
  double best = -1.0;
  for (int i = 0; i < 2; ++i)
    for (int k = 0; k < 2; ++k) {
      const double n = l.block<2, 2>(2 * i, 2 * k).norm();
      if (n > best) best = n, bi = i, bk = k;
    }
  CMatrix2 b = l.block<2, 2>(2 * bi, 2 * bk) * (std::sqrt(2.0) / best);
  CMatrix2 a;
  for (int i = 0; i < 2; ++i)
    for (int k = 0; k < 2; ++k) a(i, k) = (b.adjoint() * l.block<2, 2>(2 * i, 2 * k)).trace() / 2.0;
  return {a, b};
}

struct MagicSigns {
  std::array<Eigen::Vector4d, 3> axes;  // diagonals of XX, YY, ZZ in the magic basis
};

const MagicSigns& magic_signs() {
  static const MagicSigns signs = [] {
    MagicSigns s;
    const CMatrix4& b = magic_basis();
    const std::array<CMatrix2, 3> p{pauli::x(), pauli::y(), pauli::z()};
    for (int a = 0; a < 3; ++a) {
      const CMatrix4 d = b.adjoint() * kron(p[a], p[a]) * b;
      for (int j = 0; j < 4; ++j) s.axes[a](j) = d(j, j).real();
    }
    return s;
  }();
  return signs;
}

// Attempts the decomposition with one real mixing coefficient for the
// simultaneous diagonalisation. Returns false if the eigenbasis did not
// diagonalise both parts (near-degenerate combination).
bool kak_attempt(const CMatrix4& u, double mix, KakDecomposition& out) {
  const CMatrix4& b = magic_basis();
  const Complex det = u.determinant();
  const double phase0 = std::arg(det) / 4.0;
  const CMatrix4 us = u * std::exp(Complex(0.0, -phase0));
  const CMatrix4 up = b.adjoint() * us * b;
  const CMatrix4 m2 = up.transpose() * up;

  Eigen::Matrix4d re = m2.real(), im = m2.imag();
  Eigen::Matrix4d comb = re + mix * im;
  comb = 0.5 * (comb + comb.transpose()).eval();
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix4d> solver(comb);
  Eigen::Matrix4d p = solver.eigenvectors();
  if (p.determinant() < 0) p.col(0) *= -1.0;
  const CMatrix4 pc = p.cast<Complex>();
  const CMatrix4 d = pc.transpose() * m2 * pc;
  CMatrix4 off = d;
  off.diagonal().setZero();
  if (off.norm() > 1e-9) return false;

  Eigen::Vector4d theta;
  for (int j = 0; j < 4; ++j) theta(j) = std::arg(d(j, j)) / 2.0;
  const double turns = std::round(theta.sum() / kPi);
  if (std::fmod(std::abs(turns), 2.0) == 1.0) theta(0) -= kPi;

  CMatrix4 diag_phase = CMatrix4::Zero();
  CMatrix4 diag_phase_inv = CMatrix4::Zero();
  for (int j = 0; j < 4; ++j) {
    diag_phase(j, j) = std::exp(Complex(0.0, theta(j)));
    diag_phase_inv(j, j) = std::exp(Complex(0.0, -theta(j)));
  }
  const CMatrix4 k1 = up * pc * diag_phase_inv;
  const CMatrix4 left = b * k1 * b.adjoint();
  const CMatrix4 right = b * pc.transpose() * b.adjoint();

  const auto& signs = magic_signs();
  double global = phase0 + theta.sum() / 4.0;
  std::array<double, 3> coeff{};
  LocalPair l1 = kron_factor(left);
  const LocalPair l2 = kron_factor(right);
  const std::array<CMatrix2, 3> paulis{pauli::x(), pauli::y(), pauli::z()};
  for (int a = 0; a < 3; ++a) {
    double c = theta.dot(signs.axes[a]) / 4.0;
    // exp(i (c + n pi/2) PP) = exp(i c PP) (i PP)^n; the local (PP)^n joins l1.
    const double n = std::round(c / (kPi / 2));
    c -= n * kPi / 2;
    const int parity = static_cast<int>(std::abs(n)) % 2;
    global += n * kPi / 2;
    if (parity) l1 = l1 * LocalPair{paulis[a], paulis[a]};
    coeff[a] = c;
  }
  out.global_phase = wrap_angle(global);
  out.a1 = l1.first;
  out.b1 = l1.second;
  out.a2 = l2.first;
  out.b2 = l2.second;
  out.coefficients = coeff;

  const auto is_zero = [](double x) { return std::abs(x) < kClassTol; };
  const auto is_quarter = [](double x) { return std::abs(std::abs(x) - kPi / 4) < kClassTol; };
  const int zeros = is_zero(coeff[0]) + is_zero(coeff[1]) + is_zero(coeff[2]);
  if (zeros == 3) {
    out.cnot_count = 0;
  } else if (zeros == 2 &&
             (is_quarter(coeff[0]) || is_quarter(coeff[1]) || is_quarter(coeff[2]))) {
    out.cnot_count = 1;
  } else if (zeros >= 1) {
    out.cnot_count = 2;
  } else {
    out.cnot_count = 3;
  }
  for (double& c : out.coefficients)
    if (is_zero(c)) c = 0.0;

  const CMatrix4 rebuilt = std::exp(Complex(0.0, out.global_phase)) * kron(out.a1, out.b1) *
                           canonical_gate(coeff[0], coeff[1], coeff[2]) * kron(out.a2, out.b2);
  return (rebuilt - u).norm() < 1e-9;
}

}  // namespace

Gate Gate::euler(int qubit, double theta, double phi, double lambda) {
  Gate g;
  g.kind = Kind::Euler;
  g.qubit = qubit;
  g.theta = theta;
  g.phi = phi;
  g.lambda = lambda;
  return g;
}

Gate Gate::cnot(int control, int target) {
  Gate g;
  g.kind = Kind::Cnot;
  g.qubit = 0;
  g.control = control;
  g.target = target;
  return g;
}

int Circuit::cnot_count() const {
  int n = 0;
  for (const auto& g : gates) n += g.kind == Gate::Kind::Cnot;
  return n;
}

int Circuit::euler_count() const { return static_cast<int>(gates.size()) - cnot_count(); }

CMatrix2 euler_matrix(double theta, double phi, double lambda) {
  const double c = std::cos(0.5 * theta), s = std::sin(0.5 * theta);
  CMatrix2 m;
  m << c, -std::exp(Complex(0.0, lambda)) * s, std::exp(Complex(0.0, phi)) * s,
      std::exp(Complex(0.0, phi + lambda)) * c;
  return m;
}

ZyzAngles zyz_decompose(const CMatrix2& u) {
  if ((u.adjoint() * u - CMatrix2::Identity()).norm() >= 1e-9)
    throw Error(ErrorKind::Precondition, "zyz_decompose: input is not unitary");
  const double c = std::abs(u(0, 0));
  const double s = std::abs(u(1, 0));
  ZyzAngles out;
  out.theta = 2.0 * std::atan2(s, c);
  constexpr double kTiny = 1e-15;
  double gamma, phi, lambda;
  if (c >= s) {
    gamma = std::arg(u(0, 0));
    const double sum = std::arg(u(1, 1)) - gamma;
    if (s > kTiny) {
      phi = std::arg(u(1, 0)) - gamma;
      lambda = sum - phi;
    } else {
      phi = sum;
      lambda = 0.0;
    }
  } else {
    const double phi_g = std::arg(u(1, 0));      // phi + gamma
    const double lambda_g = std::arg(-u(0, 1));  // lambda + gamma
    if (c > kTiny) {
      gamma = phi_g + lambda_g - std::arg(u(1, 1));
    } else {
      gamma = lambda_g;
    }
    phi = phi_g - gamma;
    lambda = lambda_g - gamma;
  }
  out.global_phase = wrap_angle(gamma);
  out.phi = wrap_angle(phi);
  out.lambda = wrap_angle(lambda);
  return out;
}

const CMatrix4& magic_basis() {
  static const CMatrix4 b = [] {
    CMatrix4 m;
    m << 1.0, 0.0, 0.0, kI,
         0.0, kI, 1.0, 0.0,
         0.0, kI, -1.0, 0.0,
         1.0, 0.0, 0.0, -kI;
    return CMatrix4(m / std::sqrt(2.0));
  }();
  return b;
}

CMatrix4 canonical_gate(double cx, double cy, double cz) {
  const auto& signs = magic_signs();
  const Eigen::Vector4d theta = cx * signs.axes[0] + cy * signs.axes[1] + cz * signs.axes[2];
  CMatrix4 d = CMatrix4::Zero();
  for (int j = 0; j < 4; ++j) d(j, j) = std::exp(Complex(0.0, theta(j)));
  return magic_basis() * d * magic_basis().adjoint();
}

KakDecomposition kak(const CMatrix4& u) {
  if ((u.adjoint() * u - CMatrix4::Identity()).norm() >= 1e-8)
    throw Error(ErrorKind::Precondition, "kak: input is not unitary");
  // Fixed sequence of mixing coefficients keeps the synthesis deterministic.
  static constexpr std::array<double, 6> kMix{0.41421356237309503, 1.7320508075688772,
                                              -0.7071067811865476, 2.718281828459045,
                                              -3.141592653589793, 0.1234567890123};
  KakDecomposition out;
  for (double mix : kMix)
    if (kak_attempt(u, mix, out)) return out;
  throw Error(ErrorKind::Precondition, "kak: simultaneous diagonalisation failed");
}

Circuit kak_decompose(const CMatrix4& u) {
  const KakDecomposition dec = kak(u);
  Layered lay = canonical_layers(dec.coefficients, dec.cnot_count);
  lay.layers.front() = lay.layers.front() * LocalPair{dec.a2, dec.b2};
  lay.layers.back() = LocalPair{dec.a1, dec.b1} * lay.layers.back();

  Circuit c;
  double phase = dec.global_phase + std::arg(lay.phase);
  const auto emit = [&](int qubit, const CMatrix2& m) {
    const ZyzAngles z = zyz_decompose(m);
    phase += z.global_phase;
    if (z.theta == 0.0 && z.phi == 0.0 && z.lambda == 0.0) return;
    c.gates.push_back(Gate::euler(qubit, z.theta, z.phi, z.lambda));
  };
  for (std::size_t i = 0; i < lay.layers.size(); ++i) {
    if (i > 0) c.gates.push_back(Gate::cnot(1, 0));
    emit(1, lay.layers[i].first);
    emit(0, lay.layers[i].second);
  }
  c.global_phase = wrap_angle(phase);
  return c;
}

CMatrix4 gate_matrix(const Gate& g) {
  if (g.kind == Gate::Kind::Cnot) return cnot_matrix(g.control, g.target);
  const CMatrix2 m = euler_matrix(g.theta, g.phi, g.lambda);
  return g.qubit == 1 ? kron(m, CMatrix2::Identity()) : kron(CMatrix2::Identity(), m);
}

CMatrix4 to_unitary(const Circuit& c) {
  CMatrix4 u = CMatrix4::Identity();
  for (const auto& g : c.gates) u = gate_matrix(g) * u;
  return std::exp(Complex(0.0, c.global_phase)) * u;
}

double phase_aligned_distance(const CMatrix4& a, const CMatrix4& b) {
  const Complex overlap = (a.adjoint() * b).trace();
  const Complex align = std::abs(overlap) > 0.0 ? overlap / std::abs(overlap) : Complex(1.0);
  return (align * a - b).norm();
}

MakhlinInvariants makhlin_invariants(const CMatrix4& u) {
  const CMatrix4& b = magic_basis();
  const CMatrix4 ub = b.adjoint() * u * b;
  const CMatrix4 m = ub.transpose() * ub;
  const Complex det = u.determinant();
  const Complex tr = m.trace();
  const Complex tr2 = (m * m).trace();
  return {tr * tr / (16.0 * det), ((tr * tr - tr2) / (4.0 * det)).real()};
}

std::string format_double(double x) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), x);
  std::string s(buf, res.ptr);
  if (std::isfinite(x) && s.find_first_of(".e") == std::string::npos) s += ".0";
  return s;
}

std::string serialize(const Circuit& c) {
  std::ostringstream os;
  os << "qubits " << c.n_qubits << '\n';
  os << "phase " << format_double(c.global_phase) << '\n';
  for (const auto& g : c.gates) {
    if (g.kind == Gate::Kind::Euler)
      os << "u " << g.qubit << ' ' << format_double(g.theta) << ' ' << format_double(g.phi) << ' '
         << format_double(g.lambda) << '\n';
    else
      os << "cx " << g.control << ' ' << g.target << '\n';
  }
  if (c.measured) os << "measure all\n";
  return os.str();
}

namespace {

double parse_double(std::string_view tok, int line) {
  double v = 0.0;
  const auto res = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (res.ec != std::errc() || res.ptr != tok.data() + tok.size())
    throw ParseError(line, "bad number '" + std::string(tok) + "'");
  return v;
}

int parse_qubit(std::string_view tok, int line) {
  if (tok == "0") return 0;
  if (tok == "1") return 1;
  throw ParseError(line, "bad qubit index '" + std::string(tok) + "'");
}

std::vector<std::string_view> split_ws(std::string_view s) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && (s[i] == ' ' || s[i] == '\t' || s[i] == '\r')) ++i;
    std::size_t j = i;
    while (j < s.size() && s[j] != ' ' && s[j] != '\t' && s[j] != '\r') ++j;
    if (j > i) out.push_back(s.substr(i, j - i));
    i = j;
  }
  return out;
}

}  // namespace

Circuit parse_circuit(std::string_view text) {
  Circuit c;
  int line_no = 0;
  bool saw_header = false;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    const std::string_view line = text.substr(pos, end - pos);
    pos = end + 1;
    ++line_no;
    const auto tok = split_ws(line);
    if (tok.empty() || tok[0].front() == '#') {
      if (end == text.size()) break;
      continue;
    }
    if (tok[0] == "qubits") {
      if (tok.size() != 2 || tok[1] != "2") throw ParseError(line_no, "only 'qubits 2' is supported");
      saw_header = true;
    } else if (tok[0] == "phase") {
      if (tok.size() != 2) throw ParseError(line_no, "expected 'phase <radians>'");
      c.global_phase = parse_double(tok[1], line_no);
    } else if (tok[0] == "u") {
      if (tok.size() != 5) throw ParseError(line_no, "expected 'u <qubit> <theta> <phi> <lambda>'");
      c.gates.push_back(Gate::euler(parse_qubit(tok[1], line_no), parse_double(tok[2], line_no),
                                    parse_double(tok[3], line_no), parse_double(tok[4], line_no)));
    } else if (tok[0] == "cx") {
      if (tok.size() != 3) throw ParseError(line_no, "expected 'cx <control> <target>'");
      const int ctl = parse_qubit(tok[1], line_no), tgt = parse_qubit(tok[2], line_no);
      if (ctl == tgt) throw ParseError(line_no, "cx control equals target");
      c.gates.push_back(Gate::cnot(ctl, tgt));
    } else if (tok[0] == "measure") {
      if (tok.size() != 2 || tok[1] != "all") throw ParseError(line_no, "expected 'measure all'");
      c.measured = true;
    } else {
      throw ParseError(line_no, "unknown directive '" + std::string(tok[0]) + "'");
    }
    if (end == text.size()) break;
  }
  if (!saw_header) throw ParseError(1, "missing 'qubits 2' header");
  return c;
}

}  // namespace nhsim
