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
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "nhsim/circuit.hpp"
#include "nhsim/cli.hpp"
#include "nhsim/errors.hpp"

namespace nhsim {

std::string_view to_string(RunMode m) {
  switch (m) {
    case RunMode::Exact: return "exact";
    case RunMode::Sampled: return "sampled";
    case RunMode::Both: return "both";
  }
  return "both";
}

RunMode parse_mode(std::string_view s) {
  if (s == "exact") return RunMode::Exact;
  if (s == "sampled") return RunMode::Sampled;
  if (s == "both") return RunMode::Both;
  throw Error(ErrorKind::Config, "mode must be exact, sampled or both, got '" + std::string(s) + "'");
}

void ExperimentConfig::validate() const {
  const auto need = [](bool ok, const char* what) {
    if (!ok) throw Error(ErrorKind::Config, what);
  };
  need(std::isfinite(k) && std::isfinite(omega0), "k and omega0 must be finite");
  need(omega0 >= 0.0, "omega0 must be >= 0");
  need(std::isfinite(v) && v > 0.0, "v must be positive");
  need(std::isfinite(hbar) && hbar > 0.0, "hbar must be positive");
  need(std::isfinite(t0) && std::isfinite(t1) && t0 < t1, "t0 must be < t1");
  need(points >= 2, "points must be >= 2");
  need(initial == 0 || initial == 1, "initial must be 0 or 1");
  need(shots >= 1, "shots must be >= 1");
  need(std::isfinite(m0) && m0 > 1.0, "m0 must exceed 1");
  need(std::isfinite(f) && f > 1.0, "f must exceed 1");
  need(refinement >= 1, "refinement must be >= 1");
  need(substeps >= 1, "substeps must be >= 1");
}

ModelParams ExperimentConfig::model() const {
  ModelParams p;
  p.k = k;
  p.omega0 = omega0;
  p.v = v;
  p.hbar = hbar;
  return p;
}

DilationOptions ExperimentConfig::dilation() const {
  DilationOptions o;
  o.t0 = t0;
  o.t1 = t1;
  o.n_grid = (points - 1) * refinement + 1;
  o.substeps = substeps;
  o.m0 = m0;
  o.f = f;
  return o;
}

std::string to_text(const ExperimentConfig& c) {
  std::ostringstream os;
  os << "k = " << format_double(c.k) << '\n'
     << "omega0 = " << format_double(c.omega0) << '\n'
     << "v = " << format_double(c.v) << '\n'
     << "hbar = " << format_double(c.hbar) << '\n'
     << "t0 = " << format_double(c.t0) << '\n'
     << "t1 = " << format_double(c.t1) << '\n'
     << "points = " << c.points << '\n'
     << "initial = " << c.initial << '\n'
     << "shots = " << c.shots << '\n'
     << "seed = " << c.seed << '\n'
     << "m0 = " << format_double(c.m0) << '\n'
     << "f = " << format_double(c.f) << '\n'
     << "mode = " << to_string(c.mode) << '\n'
     << "refinement = " << c.refinement << '\n'
     << "substeps = " << c.substeps << '\n';
  return os.str();
}

namespace {

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

template <typename T>
T parse_number(std::string_view v, int line, std::string_view key) {
  T out{};
  const auto res = std::from_chars(v.data(), v.data() + v.size(), out);
  if (res.ec != std::errc() || res.ptr != v.data() + v.size())
    throw ParseError(line, "bad value '" + std::string(v) + "' for " + std::string(key));
  return out;
}

}  // namespace

ExperimentConfig parse_config(std::string_view text, ExperimentConfig c) {
  int line_no = 0;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    const std::string_view line = trim(text.substr(pos, end - pos));
    pos = end + 1;
    ++line_no;
    if (line.empty() || line.front() == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) throw ParseError(line_no, "expected 'key = value'");
    const std::string_view key = trim(line.substr(0, eq));
    const std::string_view val = trim(line.substr(eq + 1));
    if (key == "k") c.k = parse_number<double>(val, line_no, key);
    else if (key == "omega0") c.omega0 = parse_number<double>(val, line_no, key);
    else if (key == "v") c.v = parse_number<double>(val, line_no, key);
    else if (key == "hbar") c.hbar = parse_number<double>(val, line_no, key);
    else if (key == "t0") c.t0 = parse_number<double>(val, line_no, key);
    else if (key == "t1") c.t1 = parse_number<double>(val, line_no, key);
    else if (key == "points") c.points = parse_number<int>(val, line_no, key);
    else if (key == "initial") c.initial = parse_number<int>(val, line_no, key);
    else if (key == "shots") c.shots = parse_number<std::uint64_t>(val, line_no, key);
    else if (key == "seed") c.seed = parse_number<std::uint64_t>(val, line_no, key);
    else if (key == "m0") c.m0 = parse_number<double>(val, line_no, key);
    else if (key == "f") c.f = parse_number<double>(val, line_no, key);
    else if (key == "refinement") c.refinement = parse_number<int>(val, line_no, key);
    else if (key == "substeps") c.substeps = parse_number<int>(val, line_no, key);
    else if (key == "mode") {
      try {
        c.mode = parse_mode(val);
      } catch (const Error& e) {
        throw ParseError(line_no, e.what());
      }
    } else {
      throw ParseError(line_no, "unknown key '" + std::string(key) + "'");
    }
  }
  return c;
}

ExperimentConfig load_config(const std::filesystem::path& file, ExperimentConfig base) {
  std::ifstream in(file, std::ios::binary);
  if (!in) throw Error(ErrorKind::Config, "cannot read config file " + file.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str(), base);
}

}  // namespace nhsim
