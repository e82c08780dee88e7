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
#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <random>
#include <sstream>

#include "nhsim/cli.hpp"
#include "nhsim/errors.hpp"
#include "nhsim/propagator.hpp"

namespace fs = std::filesystem;

namespace nhsim {
namespace {

std::string tag(const ExperimentConfig& c) {
  return "k" + format_double(c.k) + "_init" + std::to_string(c.initial);
}

std::vector<std::string> metadata(const ExperimentConfig& c, std::string_view command) {
  std::vector<std::string> m;
  m.push_back("nhsim " + std::string(kVersion) + " " + std::string(command));
  m.push_back("sampler " + std::string(kSamplerName));
  std::istringstream in(to_text(c));
  for (std::string line; std::getline(in, line);) m.push_back("config " + line);
  return m;
}

std::string num(double x) { return format_double(x); }

std::string point_name(std::size_t i) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "point_%03zu.circ", i);
  return buf;
}

// Output population labels: p{initial}{final}.
std::string pop_label(int initial, int final_state) {
  return "p" + std::to_string(initial) + std::to_string(final_state);
}

void write_circuits(const Experiment& e, const fs::path& dir) {
  fs::create_directories(dir);
  Table index;
  index.columns = {"point", "t", "cnots", "file"};
  for (std::size_t i = 0; i < e.circuits.size(); ++i) {
    const std::string name = point_name(i);
    write_text(dir / name, serialize(e.circuits[i]));
    index.rows.push_back({std::to_string(i), num(e.records[i].t),
                          std::to_string(e.circuits[i].cnot_count()), name});
  }
  write_text(dir / "index.csv", to_csv(index));
}

Experiment run_experiment(const ExperimentConfig& c) {
  c.validate();
  const DilatedRun run = propagate(c.model(), c.dilation());
  Experiment e = prepare_experiment(run, c.points, c.initial);
  if (c.sampling()) sample_experiment(e, c.shots, c.seed);
  return e;
}

CMatrix4 haar4(std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  CMatrix4 z;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) z(i, j) = Complex(g(rng), g(rng));
  Eigen::HouseholderQR<CMatrix4> qr(z);
  CMatrix4 q = qr.householderQ();
  for (int j = 0; j < 4; ++j) q.col(j) *= qr.matrixQR()(j, j) / std::abs(qr.matrixQR()(j, j));
  return q;
}

}  // namespace

EvolveOutput cmd_evolve(const ExperimentConfig& c, const fs::path& out) {
  EvolveOutput o;
  o.experiment = run_experiment(c);
  const Experiment& e = o.experiment;
  const bool sampled = e.sampled_fit.has_value();

  Table t;
  t.metadata = metadata(c, "evolve");
  t.metadata.push_back("m0_scalar " + num(e.m0_scalar));
  t.metadata.push_back("mu_min " + num(e.mu_min));
  t.metadata.push_back("ancilla_theta " + num(e.theta));
  t.metadata.push_back("n_k_exact " + num(e.exact_fit.n_k));
  if (sampled) t.metadata.push_back("n_k_sampled " + num(e.sampled_fit->n_k));
  const std::string a = pop_label(c.initial, 0), b = pop_label(c.initial, 1);
  t.columns = {"t", a + "_theory", b + "_theory", a + "_circuit", b + "_circuit",
               a + "_sampled_norm", b + "_sampled_norm", "invariant_theory",
               "invariant_sampled", "n_k", "seed"};
  const double n_k = sampled ? e.sampled_fit->n_k : e.exact_fit.n_k;
  for (const auto& r : e.records) {
    t.rows.push_back({num(r.t), num(r.theory[0]), num(r.theory[1]), num(r.circuit_norm[0]),
                      num(r.circuit_norm[1]), sampled ? num(r.sampled_norm[0]) : "",
                      sampled ? num(r.sampled_norm[1]) : "", num(r.invariant_theory),
                      sampled ? num(r.invariant_sampled) : "", num(n_k), std::to_string(c.seed)});
  }
  o.csv = out / ("evolve_" + tag(c) + ".csv");
  write_text(o.csv, to_csv(t));

  Plot p;
  p.title = "k = " + num(c.k) + ", initial |" + std::to_string(c.initial) + ">";
  p.x_label = "t";
  p.y_label = "probability";
  Series th0{"P to 0 (theory)", {}, {}, "#1f77b4"}, th1{"P to 1 (theory)", {}, {}, "#d62728"};
  Series ci0{"P to 0 (circuit)", {}, {}, "#1f77b4", Series::Style::Cross};
  Series ci1{"P to 1 (circuit)", {}, {}, "#d62728", Series::Style::Cross};
  Series sa0{"P to 0 (sampled)", {}, {}, "#1f77b4", Series::Style::Dot};
  Series sa1{"P to 1 (sampled)", {}, {}, "#d62728", Series::Style::Dot};
  Series inv{"invariant (theory)", {}, {}, "#2ca02c", Series::Style::Dashed};
  Series inv_s{"invariant (sampled)", {}, {}, "#2ca02c", Series::Style::Dot};
  for (const auto& r : e.records) {
    for (Series* s : {&th0, &th1, &ci0, &ci1, &sa0, &sa1, &inv, &inv_s}) s->x.push_back(r.t);
    th0.y.push_back(r.theory[0]);
    th1.y.push_back(r.theory[1]);
    ci0.y.push_back(r.circuit_norm[0]);
    ci1.y.push_back(r.circuit_norm[1]);
    sa0.y.push_back(r.sampled_norm[0]);
    sa1.y.push_back(r.sampled_norm[1]);
    inv.y.push_back(r.invariant_theory);
    inv_s.y.push_back(r.invariant_sampled);
  }
  p.series = {th0, th1, ci0, ci1};
  if (sampled) {
    p.series.push_back(sa0);
    p.series.push_back(sa1);
  }
  p.series.push_back(inv);
  if (sampled) p.series.push_back(inv_s);
  o.svg = out / ("evolve_" + tag(c) + ".svg");
  write_text(o.svg, render_svg(p));

  o.circuit_dir = out / ("circuits_" + tag(c));
  write_circuits(e, o.circuit_dir);
  return o;
}

fs::path cmd_raw4d(const ExperimentConfig& c, const fs::path& out) {
  const Experiment e = run_experiment(c);
  Table t;
  t.metadata = metadata(c, "raw4d");
  t.metadata.push_back("m0_scalar " + num(e.m0_scalar));
  const bool exact = c.mode != RunMode::Sampled;
  const bool sampled = c.sampling();
  t.columns = {"t"};
  if (exact)
    for (const char* s : {"p00", "p01", "p10", "p11"}) t.columns.push_back(s);
  if (sampled)
    for (const char* s : {"p00", "p01", "p10", "p11"})
      t.columns.push_back(exact ? std::string(s) + "_sampled" : std::string(s));
  for (const auto& r : e.records) {
    std::vector<std::string> row{num(r.t)};
    if (exact)
      for (double x : r.circuit_raw) row.push_back(num(x));
    if (sampled)
      for (auto n : r.counts->counts)
        row.push_back(num(static_cast<double>(n) / static_cast<double>(r.counts->shots)));
    t.rows.push_back(std::move(row));
  }
  const fs::path csv = out / ("raw4d_" + tag(c) + ".csv");
  write_text(csv, to_csv(t));

  Plot p;
  p.title = "dilated populations, k = " + num(c.k);
  p.x_label = "t";
  p.y_label = "population";
  const char* names[] = {"|00>", "|01>", "|10>", "|11>"};
  const char* colors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd"};
  for (int j = 0; j < 4; ++j) {
    Series s{names[j], {}, {}, colors[j]};
    Series d{std::string(names[j]) + " sampled", {}, {}, colors[j], Series::Style::Dot};
    for (const auto& r : e.records) {
      s.x.push_back(r.t);
      s.y.push_back(r.circuit_raw[j]);
      if (sampled) {
        d.x.push_back(r.t);
        d.y.push_back(static_cast<double>(r.counts->counts[j]) / static_cast<double>(r.counts->shots));
      }
    }
    p.series.push_back(s);
    if (sampled) p.series.push_back(d);
  }
  write_text(out / ("raw4d_" + tag(c) + ".svg"), render_svg(p));
  return csv;
}

fs::path cmd_sweep_omega(const ExperimentConfig& c, const SweepOptions& s, const fs::path& out) {
  c.validate();
  if (c.k <= -1.0)
    throw Error(ErrorKind::UnsupportedRegime,
                "sweep-omega: k <= -1 drives the metric beyond double precision range");
  if (s.omega_points < 1 || !(s.omega_min >= 0.0) || !(s.omega_max >= s.omega_min) ||
      s.t0_list.empty())
    throw Error(ErrorKind::Config, "sweep-omega: bad omega range or empty t0 list");
  const bool exact = c.mode != RunMode::Sampled;
  const bool sampled = c.sampling();
  const std::string a = pop_label(c.initial, 0), b = pop_label(c.initial, 1);
  Table t;
  t.metadata = metadata(c, "sweep-omega");
  t.columns = {"k", "t0", "omega0"};
  if (exact) t.columns.insert(t.columns.end(), {a, b});
  if (sampled) {
    t.columns.push_back(exact ? a + "_sampled" : a);
    t.columns.push_back(exact ? b + "_sampled" : b);
  }
  t.columns.insert(t.columns.end(), {a + "_theory", b + "_theory"});

  Plot plot;
  plot.title = "final populations, k = " + num(c.k);
  plot.x_label = "omega0";
  plot.y_label = "P to " + std::to_string(c.initial) + " at t = " + num(c.t1);
  const char* colors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e"};

  std::uint64_t row_index = 0;
  for (std::size_t ti = 0; ti < s.t0_list.size(); ++ti) {
    const double t0 = s.t0_list[ti];
    if (!(t0 < c.t1)) throw Error(ErrorKind::Config, "sweep-omega: each t0 must be < t1");
    Series th{"theory, t0 = " + num(t0), {}, {}, colors[ti % 5]};
    Series cx{"circuit, t0 = " + num(t0), {}, {}, colors[ti % 5], Series::Style::Cross};
    Series dt{"sampled, t0 = " + num(t0), {}, {}, colors[ti % 5], Series::Style::Dot};
    for (int j = 0; j < s.omega_points; ++j) {
      const double w = s.omega_points == 1
                           ? s.omega_min
                           : s.omega_min + (s.omega_max - s.omega_min) * j / (s.omega_points - 1);
      ExperimentConfig cc = c;
      cc.omega0 = w;
      DilationOptions o = cc.dilation();
      o.t0 = t0;
      const double frac = (c.t1 - t0) / (c.t1 - c.t0);
      o.n_grid = std::max(2, static_cast<int>(std::lround(frac * (c.points - 1) * c.refinement)) + 1);
      const DilatedRun run = propagate(cc.model(), o);
      const PopPair theory{std::norm(run.u_q.back()(0, c.initial)),
                           std::norm(run.u_q.back()(1, c.initial))};
      const Circuit circ = build_point_circuit(run.ctx, run.u_aq.back(), c.initial);
      const Populations raw = populations(run_exact(circ, basis_state(0)));
      const double m0 = run.ctx.m0_scalar();
      std::vector<std::string> row{num(c.k), num(t0), num(w)};
      if (exact) {
        row.push_back(num(m0 * raw[0]));
        row.push_back(num(m0 * raw[1]));
      }
      PopPair samp{};
      if (sampled) {
        Populations p = raw;
        const double total = p[0] + p[1] + p[2] + p[3];
        for (double& x : p) x /= total;
        samp = postselect(sample(p, c.shots, derive_seed(c.seed, row_index)));
        row.push_back(num(m0 * samp[0]));
        row.push_back(num(m0 * samp[1]));
      }
      row.push_back(num(theory[0]));
      row.push_back(num(theory[1]));
      t.rows.push_back(std::move(row));
      ++row_index;
      th.x.push_back(w);
      th.y.push_back(theory[0]);
      cx.x.push_back(w);
      cx.y.push_back(m0 * raw[0]);
      dt.x.push_back(w);
      dt.y.push_back(m0 * samp[0]);
    }
    plot.series.push_back(th);
    if (exact) plot.series.push_back(cx);
    if (sampled) plot.series.push_back(dt);
  }
  const fs::path csv = out / ("sweep_omega_" + tag(c) + ".csv");
  write_text(csv, to_csv(t));
  write_text(out / ("sweep_omega_" + tag(c) + ".svg"), render_svg(plot));
  return csv;
}

fs::path cmd_k_surface(const ExperimentConfig& c, const std::vector<double>& ks, const fs::path& out) {
  c.validate();
  Table t;
  t.metadata = metadata(c, "k-surface");
  const std::string a = pop_label(c.initial, 0), b = pop_label(c.initial, 1);
  t.columns = {"k", "t", a, b, "invariant"};
  Plot plot;
  plot.title = "theory surface, P to " + std::to_string(c.initial);
  plot.x_label = "t";
  plot.y_label = "P to 0";
  const char* colors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#17becf"};
  for (std::size_t ki = 0; ki < ks.size(); ++ki) {
    ExperimentConfig cc = c;
    cc.k = ks[ki];
    const ModelParams p = cc.model();
    Series s{"k = " + num(cc.k), {}, {}, colors[ki % 7]};
    CMatrix2 u = CMatrix2::Identity();
    for (int j = 0; j < c.points; ++j) {
      const double tj = c.t0 + (c.t1 - c.t0) * j / (c.points - 1);
      if (j > 0) {
        PropagatorSpec<2> spec;
        spec.generator = [p](double x) { return hamiltonian(x, p); };
        spec.t0 = c.t0 + (c.t1 - c.t0) * (j - 1) / (c.points - 1);
        spec.t1 = tj;
        spec.hbar = p.hbar;
        spec.n_steps = c.refinement * c.substeps;
        u = evolve<2>(spec) * u;
      }
      const PopPair pr{std::norm(u(0, c.initial)), std::norm(u(1, c.initial))};
      t.rows.push_back({num(cc.k), num(tj), num(pr[0]), num(pr[1]), num(invariant(cc.k, pr))});
      s.x.push_back(tj);
      s.y.push_back(pr[0]);
    }
    plot.series.push_back(s);
  }
  const fs::path csv = out / ("k_surface_init" + std::to_string(c.initial) + ".csv");
  write_text(csv, to_csv(t));
  write_text(out / ("k_surface_init" + std::to_string(c.initial) + ".svg"), render_svg(plot));
  return csv;
}

void cmd_figures(const ExperimentConfig& c, const SweepOptions& s, const fs::path& out,
                 std::ostream& log) {
  for (double k : {0.5, 1.0, 2.0, -1.0})
    for (int initial : {0, 1}) {
      ExperimentConfig cc = c;
      cc.k = k;
      cc.initial = initial;
      log << "evolve " << cmd_evolve(cc, out).csv.string() << '\n';
    }
  for (double k : {0.5, -1.0}) {
    ExperimentConfig cc = c;
    cc.k = k;
    cc.initial = 0;
    log << "raw4d " << cmd_raw4d(cc, out).string() << '\n';
  }
  for (double k : {0.5, 1.0, 2.0}) {
    ExperimentConfig cc = c;
    cc.k = k;
    cc.initial = 0;
    log << "sweep-omega " << cmd_sweep_omega(cc, s, out).string() << '\n';
  }
  ExperimentConfig cc = c;
  cc.initial = 0;
  log << "k-surface "
      << cmd_k_surface(cc, {-1.0, -0.5, 0.0, 0.5, 1.0, 1.5, 2.0}, out).string() << '\n';
}

std::vector<fs::path> cmd_export_circuits(const ExperimentConfig& c, const fs::path& out) {
  ExperimentConfig cc = c;
  cc.mode = RunMode::Exact;
  const Experiment e = run_experiment(cc);
  const fs::path dir = out / ("circuits_" + tag(c));
  write_circuits(e, dir);
  std::vector<fs::path> files;
  for (std::size_t i = 0; i < e.circuits.size(); ++i) files.push_back(dir / point_name(i));
  return files;
}

std::vector<CheckResult> cmd_verify(const ExperimentConfig& c, const VerifyOptions& o) {
  c.validate();
  std::vector<CheckResult> out;
  const auto add = [&out](std::string name, double value, double tol) {
    out.push_back({std::move(name), value, tol, std::isfinite(value) && value < tol});
  };
  const ModelParams p = c.model();
  std::vector<double> times;
  for (int i = 0; i <= 80; ++i) times.push_back(-20.0 + 0.5 * i);

  // Model predicates.
  {
    double eig = 0.0, pt_rot = 0.0, pt_h = 0.0, pseudo = 0.0;
    for (double k : {p.k, 0.5, 2.0, -1.0})
      for (double t : times) {
        ModelParams q = p;
        q.k = k;
        const CMatrix2 h = hamiltonian(t, q);
        const AdiabaticPair a = adiabatic(t, q);
        if (!a.at_exceptional_point) {
          eig = std::max(eig, (h * a.state_plus - a.e_plus * a.state_plus).norm());
          eig = std::max(eig, (h * a.state_minus - a.e_minus * a.state_minus).norm());
        }
        pt_rot = std::max(pt_rot, pt_commutator_linear_part(rotated_hamiltonian(t, q)).norm());
        const double eps = q.epsilon(t);
        CMatrix2 expect;
        expect << (1.0 - k) * q.omega0, -2.0 * eps, 2.0 * eps, (k - 1.0) * q.omega0;
        pt_h = std::max(pt_h, (pt_commutator_linear_part(h) - 0.5 * expect).norm());
        if (k != 0.0) pseudo = std::max(pseudo, pseudo_residual(h, pseudo_metric(k)));
      }
    add("model.adiabatic_eigenpairs", eig, 1e-12);
    add("model.pt_commutator_rotated", pt_rot, 1e-14);
    add("model.pt_commutator_hamiltonian", pt_h, 1e-12);
    add("model.pseudo_hermiticity", pseudo, 1e-12);
    ModelParams ep;
    ep.k = -1.0;
    double par = 0.0;
    for (double t : {-1.0, 1.0}) {
      const AdiabaticPair a = adiabatic(t, ep);
      CMatrix2 m;
      m.col(0) = a.state_plus;
      m.col(1) = a.state_minus;
      par = std::max(par, a.at_exceptional_point ? std::abs(m.determinant()) : 1.0);
    }
    add("model.exceptional_point_parallel", par, 1e-10);
  }

  // Dilation on the configured parameters.
  {
    DilationOptions opt = c.dilation();
    opt.gamma_commutator_sign = o.fault_gamma_sign ? -1.0 : 1.0;
    DilationContext ctx(p, opt);
    double min_eig = 1e300, herm = 0.0;
    for (std::size_t i = 0; i < ctx.grid().size(); ++i) {
      const CMatrix2 m = m_of_t(ctx, ctx.grid()[i]);
      min_eig = std::min(min_eig, herm_eig<2>(CMatrix2(m - CMatrix2::Identity())).eigenvalues(0));
      if (i % static_cast<std::size_t>(c.refinement) == 0) {
        const auto ops = dilated_operators(ctx, ctx.grid()[i]);
        herm = std::max({herm, ops.lambda_residual / std::max(1.0, ops.lambda.norm()),
                         ops.gamma_residual / std::max(1.0, ops.gamma.norm())});
      }
    }
    add("dilation.calibration_sharpness", std::abs(min_eig - (c.f - 1.0)), 1e-8);

    auto u_aq = dilated_propagators(ctx);
    auto u_q = qubit_propagators(ctx);
    const double theta = ancilla_theta(ctx);
    double colin = 0.0;
    for (int initial : {0, 1}) {
      const CVector4 s0 = preparation(theta, initial).col(0);
      for (std::size_t i = 0; i < u_aq.size(); ++i) {
        const CVector2 block = (u_aq[i] * s0).head<2>();
        colin = std::max(colin, colinearity_residual<2>(block, CVector2(u_q[i].col(initial))));
      }
    }
    add("dilation.identity", colin, 1e-7);
    add("dilation.lambda_gamma_hermiticity", herm, 1e-9);

    DilatedRun run{std::move(ctx), std::move(u_aq), std::move(u_q)};
    double inv = 0.0, inv_th = 0.0;
    for (int initial : {0, 1}) {
      const Experiment e = prepare_experiment(run, c.points, initial);
      const double target = initial == 0 ? p.k : 1.0;
      for (const auto& r : e.records) {
        inv = std::max(inv, std::abs(r.invariant_circuit - target));
        inv_th = std::max(inv_th, std::abs(r.invariant_theory - target));
      }
    }
    add("analysis.invariant_theory", inv_th, 1e-7);
    add("analysis.invariant_circuit", inv, 1e-6);
  }

  // Hermitian reduction.
  {
    ModelParams h = p;
    h.k = 1.0;
    DilationOptions opt = c.dilation();
    opt.gamma_commutator_sign = o.fault_gamma_sign ? -1.0 : 1.0;
    const DilatedRun run = propagate(h, opt);
    double gamma = 0.0, lambda = 0.0, anc = 0.0;
    const CVector4 s0 = preparation(ancilla_theta(run.ctx), 0).col(0);
    for (std::size_t i = 0; i < run.u_aq.size(); i += static_cast<std::size_t>(c.refinement)) {
      const double t = run.ctx.grid()[i];
      const auto ops = dilated_operators(run.ctx, t);
      gamma = std::max(gamma, ops.gamma.norm());
      lambda = std::max(lambda, (ops.lambda - hamiltonian(t, h)).norm());
      anc = std::max(anc, std::abs((run.u_aq[i] * s0).head<2>().squaredNorm() - 1.0 / c.f));
    }
    add("hermitian.gamma_zero", gamma, 1e-10);
    add("hermitian.lambda_equals_h", lambda, 1e-9);
    add("hermitian.ancilla_population", anc, 1e-9);
  }

  // Synthesis.
  {
    std::mt19937_64 rng(c.seed);
    double worst = 0.0;
    int max_cx = 0;
    for (int i = 0; i < o.haar_samples; ++i) {
      const CMatrix4 u = haar4(rng);
      const Circuit circ = kak_decompose(u);
      worst = std::max(worst, phase_aligned_distance(to_unitary(circ), u));
      max_cx = std::max(max_cx, circ.cnot_count());
      const Circuit back = parse_circuit(serialize(circ));
      worst = std::max(worst, (to_unitary(back) - to_unitary(circ)).norm());
    }
    add("circuit.kak_roundtrip", worst, 1e-8);
    add("circuit.cnot_excess", static_cast<double>(std::max(0, max_cx - 3)), 0.5);
  }
  return out;
}

}  // namespace nhsim
