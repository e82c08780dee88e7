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
#include <CLI11.hpp>

#include <charconv>
#include <functional>
#include <ostream>
#include <sstream>

#include "nhsim/cli.hpp"
#include "nhsim/errors.hpp"

namespace fs = std::filesystem;

namespace nhsim {
namespace {

int exit_code(ErrorKind k) {
  switch (k) {
    case ErrorKind::Config:
    case ErrorKind::Parse:
    case ErrorKind::UnsupportedRegime:
    case ErrorKind::InvalidInput:
      return 2;
    default:
      return 3;
  }
}

std::vector<double> parse_list(const std::string& s) {
  std::vector<double> out;
  std::stringstream in(s);
  for (std::string item; std::getline(in, item, ',');) {
    double v = 0.0;
    const auto res = std::from_chars(item.data(), item.data() + item.size(), v);
    if (res.ec != std::errc() || res.ptr != item.data() + item.size())
      throw Error(ErrorKind::Config, "bad number '" + item + "' in list");
    out.push_back(v);
  }
  return out;
}

// Options shared by every subcommand. Values given on the command line are
// applied after the config file.
struct CommonOptions {
  std::string config;
  std::string out = "out";
  ExperimentConfig flags;
  std::string mode;
  std::vector<std::pair<CLI::Option*, std::function<void(ExperimentConfig&)>>> setters;

  void attach(CLI::App* app) {
    app->add_option("--config", config, "flat key = value config file");
    app->add_option("--out", out, "output directory")->capture_default_str();
    bind(app->add_option("--k", flags.k, "non-Hermiticity degree"),
         [this](ExperimentConfig& c) { c.k = flags.k; });
    bind(app->add_option("--omega0", flags.omega0, "coupling"),
         [this](ExperimentConfig& c) { c.omega0 = flags.omega0; });
    bind(app->add_option("--t0", flags.t0, "initial time"),
         [this](ExperimentConfig& c) { c.t0 = flags.t0; });
    bind(app->add_option("--t1", flags.t1, "final time"),
         [this](ExperimentConfig& c) { c.t1 = flags.t1; });
    bind(app->add_option("--points", flags.points, "output grid points"),
         [this](ExperimentConfig& c) { c.points = flags.points; });
    bind(app->add_option("--shots", flags.shots, "shots per point"),
         [this](ExperimentConfig& c) { c.shots = flags.shots; });
    bind(app->add_option("--seed", flags.seed, "base seed"),
         [this](ExperimentConfig& c) { c.seed = flags.seed; });
    bind(app->add_option("--initial", flags.initial, "initial qubit state")
             ->check(CLI::IsMember({0, 1})),
         [this](ExperimentConfig& c) { c.initial = flags.initial; });
    bind(app->add_option("--mode", mode, "exact, sampled or both")
             ->check(CLI::IsMember({"exact", "sampled", "both"})),
         [this](ExperimentConfig& c) { c.mode = parse_mode(mode); });
    bind(app->add_option("--m0", flags.m0, "trial metric seed, > 1"),
         [this](ExperimentConfig& c) { c.m0 = flags.m0; });
    bind(app->add_option("--f", flags.f, "pinned minimum metric eigenvalue, > 1"),
         [this](ExperimentConfig& c) { c.f = flags.f; });
    bind(app->add_option("--refinement", flags.refinement, "lattice intervals per output interval"),
         [this](ExperimentConfig& c) { c.refinement = flags.refinement; });
    bind(app->add_option("--substeps", flags.substeps, "midpoint steps per lattice interval"),
         [this](ExperimentConfig& c) { c.substeps = flags.substeps; });
  }

  void bind(CLI::Option* o, std::function<void(ExperimentConfig&)> f) {
    setters.emplace_back(o, std::move(f));
  }

  ExperimentConfig resolve() const {
    ExperimentConfig c = config.empty() ? ExperimentConfig{} : load_config(config);
    for (const auto& [opt, set] : setters)
      if (opt->count() > 0) set(c);
    c.validate();
    return c;
  }
};

struct SweepFlags {
  SweepOptions opts;
  std::string t0_list = "-20,0";

  void attach(CLI::App* app) {
    app->add_option("--omega-min", opts.omega_min, "smallest coupling")->capture_default_str();
    app->add_option("--omega-max", opts.omega_max, "largest coupling")->capture_default_str();
    app->add_option("--omega-points", opts.omega_points, "number of couplings")->capture_default_str();
    app->add_option("--t0-list", t0_list, "comma-separated start times")->capture_default_str();
  }

  SweepOptions resolve() const {
    SweepOptions s = opts;
    s.t0_list = parse_list(t0_list);
    return s;
  }
};

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Dilated non-Hermitian qubit dynamics: circuits, sampling and figures", "nhsim"};
  app.set_version_flag("--version", std::string(kVersion));
  app.require_subcommand(1);

  std::vector<std::unique_ptr<CommonOptions>> commons;
  const auto common = [&](CLI::App* sub) {
    commons.push_back(std::make_unique<CommonOptions>());
    commons.back()->attach(sub);
    return commons.back().get();
  };

  auto* evolve = app.add_subcommand("evolve", "time series with theory, circuit and sampled columns");
  auto* evolve_opts = common(evolve);
  auto* raw4d = app.add_subcommand("raw4d", "dilated populations before postselection");
  auto* raw4d_opts = common(raw4d);
  auto* sweep = app.add_subcommand("sweep-omega", "final populations against the coupling");
  auto* sweep_opts = common(sweep);
  SweepFlags sweep_flags;
  sweep_flags.attach(sweep);
  auto* figures = app.add_subcommand("figures", "all figure data sets");
  auto* figures_opts = common(figures);
  SweepFlags figures_flags;
  figures_flags.attach(figures);
  auto* verify = app.add_subcommand("verify", "property suite, one line per check");
  auto* verify_opts = common(verify);
  std::string fault;
  verify->add_option("--fault", fault)->group("")->check(CLI::IsMember({"gamma-sign"}));
  int haar = 200;
  verify->add_option("--haar", haar, "random unitaries in the synthesis check")->capture_default_str();
  auto* export_c = app.add_subcommand("export-circuits", "one circuit file per grid point");
  auto* export_opts = common(export_c);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 2;
  }

  try {
    if (evolve->parsed()) {
      const auto o = cmd_evolve(evolve_opts->resolve(), evolve_opts->out);
      out << o.csv.string() << '\n' << o.svg.string() << '\n' << o.circuit_dir.string() << '\n';
    } else if (raw4d->parsed()) {
      out << cmd_raw4d(raw4d_opts->resolve(), raw4d_opts->out).string() << '\n';
    } else if (sweep->parsed()) {
      out << cmd_sweep_omega(sweep_opts->resolve(), sweep_flags.resolve(), sweep_opts->out).string()
          << '\n';
    } else if (figures->parsed()) {
      cmd_figures(figures_opts->resolve(), figures_flags.resolve(), figures_opts->out, out);
    } else if (export_c->parsed()) {
      const auto files = cmd_export_circuits(export_opts->resolve(), export_opts->out);
      out << files.size() << " circuits in " << files.front().parent_path().string() << '\n';
    } else if (verify->parsed()) {
      VerifyOptions vo;
      vo.fault_gamma_sign = fault == "gamma-sign";
      vo.haar_samples = haar;
      const auto checks = cmd_verify(verify_opts->resolve(), vo);
      const CheckResult* first_fail = nullptr;
      for (const auto& c : checks) {
        out << (c.pass ? "PASS " : "FAIL ") << c.name << " value=" << format_double(c.value)
            << " tol=" << format_double(c.tol) << '\n';
        if (!c.pass && !first_fail) first_fail = &c;
      }
      if (first_fail) {
        err << "verify: first failing check " << first_fail->name << '\n';
        return 1;
      }
    }
  } catch (const Error& e) {
    err << "error kind=" << to_string(e.kind()) << " message=\"" << e.what() << "\"\n";
    return exit_code(e.kind());
  } catch (const fs::filesystem_error& e) {
    err << "error kind=io message=\"" << e.what() << "\"\n";
    return 2;
  }
  return 0;
}

}  // namespace nhsim
