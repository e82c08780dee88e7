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
#include "nhsim/simulator.hpp"

#include <cmath>
#include <string>

#include "nhsim/errors.hpp"

namespace nhsim {

StateVector basis_state(int index) {
  if (index < 0 || index > 3) throw Error(ErrorKind::InvalidInput, "basis_state: index out of range");
  StateVector s = StateVector::Zero();
  s(index) = 1.0;
  return s;
}

StateVector run_exact(const Circuit& c, const StateVector& initial) {
  StateVector s = initial;
  for (const auto& g : c.gates) s = gate_matrix(g) * s;
  return std::exp(Complex(0.0, c.global_phase)) * s;
}

Populations populations(const StateVector& s) {
  return {std::norm(s(0)), std::norm(s(1)), std::norm(s(2)), std::norm(s(3))};
}

std::uint64_t ShotCounts::operator[](std::string_view key) const {
  if (key.size() != 2 || (key[0] != '0' && key[0] != '1') || (key[1] != '0' && key[1] != '1'))
    throw Error(ErrorKind::InvalidInput, "ShotCounts: bad key '" + std::string(key) + "'");
  return counts[(key[0] - '0') * 2 + (key[1] - '0')];
}

std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

std::uint64_t SplitMix64::next() {
  state_ += 0x9E3779B97F4A7C15ULL;
  return mix64(state_);
}

double SplitMix64::uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

std::uint64_t derive_seed(std::uint64_t base_seed, std::uint64_t point_index) {
  return mix64(base_seed ^ mix64(point_index + 0x632BE59BD9B4E019ULL));
}

ShotCounts sample(const Populations& probs, std::uint64_t shots, std::uint64_t seed) {
  if (shots < 1) throw Error(ErrorKind::Precondition, "sample: shots must be >= 1");
  double total = 0.0;
  Populations p = probs;
  for (double& x : p) {
    if (!std::isfinite(x) || x < -1e-12)
      throw Error(ErrorKind::Domain, "sample: negative or non-finite probability");
    x = std::max(x, 0.0);
    total += x;
  }
  if (std::abs(total - 1.0) >= 1e-9)
    throw Error(ErrorKind::Precondition, "sample: probabilities must sum to 1");
  const std::array<double, 3> cdf{p[0], p[0] + p[1], p[0] + p[1] + p[2]};

  ShotCounts out;
  out.shots = shots;
  out.seed = seed;
  SplitMix64 rng(seed);
  for (std::uint64_t i = 0; i < shots; ++i) {
    const double u = rng.uniform() * total;
    int bin = 3;
    for (int b = 0; b < 3; ++b)
      if (u < cdf[b]) {
        bin = b;
        break;
      }
    // Empty bins are unreachable even at the edges of the CDF.
    while (bin > 0 && p[bin] == 0.0) --bin;
    ++out.counts[bin];
  }
  return out;
}

}  // namespace nhsim
