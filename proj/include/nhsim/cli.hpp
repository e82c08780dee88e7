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

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "nhsim/analysis.hpp"
#include "nhsim/dilation.hpp"
#include "nhsim/model.hpp"

namespace nhsim {

inline constexpr std::string_view kVersion = "1.0.0";

enum class RunMode { Exact, Sampled, Both };

std::string_view to_string(RunMode m);
RunMode parse_mode(std::string_view s);

struct ExperimentConfig {
  double k = 0.5;
  double omega0 = 1.0;
  double v = 1.0;
  double hbar = 1.0;
  double t0 = -20.0;
  double t1 = 20.0;
  int points = 81;
  int initial = 0;
  std::uint64_t shots = 10000;
  std::uint64_t seed = 20240417;
  double m0 = 2.0;
  double f = 1.1;
  RunMode mode = RunMode::Both;
  int refinement = 10;  ///< lattice intervals per output interval
  int substeps = 512;   ///< midpoint steps per lattice interval

  /// Throws Config on out-of-domain values.
  void validate() const;
  ModelParams model() const;
  DilationOptions dilation() const;
  bool sampling() const { return mode != RunMode::Exact; }

  bool operator==(const ExperimentConfig&) const = default;
};

/// Flat "key = value" text, one key per line, in a fixed order.
std::string to_text(const ExperimentConfig& c);

/// Applies the keys found in text on top of base. Blank lines and lines
/// starting with '#' are ignored.
ExperimentConfig parse_config(std::string_view text, ExperimentConfig base = {});

ExperimentConfig load_config(const std::filesystem::path& file, ExperimentConfig base = {});

// Tabular output ------------------------------------------------------------

struct Table {
  std::vector<std::string> metadata;  ///< written as "# " lines
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;
};

std::string to_csv(const Table& t);
void write_text(const std::filesystem::path& file, std::string_view text);

struct Series {
  std::string name;
  std::vector<double> x, y;
  std::string color = "#1f77b4";
  enum class Style { Line, Dashed, Cross, Dot } style = Style::Line;
};

struct Plot {
  std::string title;
  std::string x_label;
  std::string y_label;
  std::vector<Series> series;
};

std::string render_svg(const Plot& p);

// Commands --------------------------------------------------------------------

struct EvolveOutput {
  Experiment experiment;
  std::filesystem::path csv;
  std::filesystem::path svg;
  std::filesystem::path circuit_dir;
};

EvolveOutput cmd_evolve(const ExperimentConfig& c, const std::filesystem::path& out);

std::filesystem::path cmd_raw4d(const ExperimentConfig& c, const std::filesystem::path& out);

struct SweepOptions {
  double omega_min = 0.0;
  double omega_max = 3.0;
  int omega_points = 31;
  std::vector<double> t0_list{-20.0, 0.0};
};

std::filesystem::path cmd_sweep_omega(const ExperimentConfig& c, const SweepOptions& s,
                                      const std::filesystem::path& out);

/// Theory-only P(t) surface over a list of k values.
std::filesystem::path cmd_k_surface(const ExperimentConfig& c, const std::vector<double>& ks,
                                    const std::filesystem::path& out);

void cmd_figures(const ExperimentConfig& c, const SweepOptions& s, const std::filesystem::path& out,
                 std::ostream& log);

std::vector<std::filesystem::path> cmd_export_circuits(const ExperimentConfig& c,
                                                       const std::filesystem::path& out);

struct CheckResult {
  std::string name;
  double value = 0.0;
  double tol = 0.0;
  bool pass = false;
};

struct VerifyOptions {
  bool fault_gamma_sign = false;
  int haar_samples = 200;
};

std::vector<CheckResult> cmd_verify(const ExperimentConfig& c, const VerifyOptions& o);

/// Full command-line entry point; returns the process exit code.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace nhsim
