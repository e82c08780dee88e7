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

#include <array>
#include <cstdint>
#include <string_view>

#include "nhsim/circuit.hpp"
#include "nhsim/linalg.hpp"

namespace nhsim {

/// Amplitudes over |00>, |01>, |10>, |11>; the first label is qubit 1 (ancilla).
using StateVector = CVector4;

/// Populations in the same order as StateVector.
using Populations = std::array<double, 4>;

StateVector basis_state(int index);

StateVector run_exact(const Circuit& c, const StateVector& initial);

Populations populations(const StateVector& s);

inline constexpr std::string_view kSamplerName = "splitmix64-ctr-v1";

struct ShotCounts {
  std::array<std::uint64_t, 4> counts{};
  std::uint64_t shots = 0;
  std::uint64_t seed = 0;

  /// Count for a two-character key "00" .. "11".
  std::uint64_t operator[](std::string_view key) const;
};

/// Counter-based splitmix64 stream: value i is mix(seed + (i + 1) * golden).
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}
  std::uint64_t next();
  /// Uniform in [0, 1) from the top 53 bits.
  double uniform();

 private:
  std::uint64_t state_;
};

std::uint64_t mix64(std::uint64_t z);

/// Independent seed for one grid point of a sweep.
std::uint64_t derive_seed(std::uint64_t base_seed, std::uint64_t point_index);

/// Multinomial draw by inverse CDF, one uniform per shot.
ShotCounts sample(const Populations& probs, std::uint64_t shots, std::uint64_t seed);

}  // namespace nhsim
