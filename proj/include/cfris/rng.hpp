// SPDX-License-Identifier: Apache-2.0
//
// cfris - energy-efficiency simulator/optimizer for multi-RIS-aided
// cell-free massive MIMO downlink
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#pragma once

#include <cstdint>
#include <random>

#include "cfris/common.hpp"

namespace cfris {

/// Deterministic random source. All distributions are generated from raw
/// mt19937_64 output with fixed arithmetic (no std::*_distribution), so the
/// same seed produces the same stream on every platform and build.
///
/// Streams are split with `fork(tag)`: child seeds are derived by mixing the
/// parent seed and the tag through splitmix64. The harness documents its
/// tag assignments (axis index, trial index, scheme id).
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : seed_(seed), engine_(mix(seed)) {}

  std::uint64_t seed() const { return seed_; }

  /// Independent child stream for (this seed, tag).
  Rng fork(std::uint64_t tag) const {
    return Rng(mix(seed_ + 0x9e3779b97f4a7c15ULL * (tag + 1)));
  }

  std::uint64_t next_u64() { return engine_(); }

  /// Uniform on [0, 1) with 53-bit resolution.
  double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  /// Uniform integer in [0, n).
  std::uint64_t uniform_int(std::uint64_t n);

  bool bernoulli(double p) { return uniform() < p; }

  /// Standard normal via Box-Muller (deterministic across platforms).
  double normal();

  /// Circularly-symmetric complex normal CN(0, 1): E|z|^2 = 1.
  cplx cnormal();

  /// Vector of iid CN(0, 1) entries.
  CVec cnormal_vector(Eigen::Index n);

 private:
  static std::uint64_t mix(std::uint64_t x);  // splitmix64 finalizer

  std::uint64_t seed_;
  std::mt19937_64 engine_;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace cfris
