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

#include <vector>

#include "cfris/estimation.hpp"
#include "cfris/power_model.hpp"
#include "cfris/precoding.hpp"

namespace cfris {

/// The three decision-variable blocks of the EE problem.
struct NetworkState {
  ApActivation activation;
  Vec power;       // K
  RisPhase phase;  // L*N angles
};

/// Everything that depends on the RIS phases but not on (activation, power):
/// true composite channel, MMSE estimate, and error covariances.
struct PhaseOutputs {
  CMat g_true;                 // M x K
  CMat g_hat;                  // M x K
  std::vector<CMat> err_cov;   // K matrices, M x M
};

/// Feasibility and objective values of one (activation, power) pair under
/// fixed phase outputs.
struct StateEval {
  bool precoder_ok = false;
  bool qos_ok = false;
  bool caps_ok = false;
  RateReport rates;
  Mat gamma;                  // K x K
  Precoder precoder;
  double sum_rate_bps = 0.0;  // f
  double total_power_w = 0.0; // g
  double ee = 0.0;

  bool feasible() const { return precoder_ok && qos_ok && caps_ok; }
  double objective(double alpha) const { return sum_rate_bps - alpha * total_power_w; }
};

/// One coherence block of one scenario drop: owns the sampled channels and a
/// pinned pilot-noise realization, and evaluates decision states against
/// them. The pinned noise makes every evaluation deterministic in the state,
/// which the finite-difference RIS gradients rely on. All methods are const
/// and reentrant.
class SystemModel {
 public:
  SystemModel(ScenarioConfig cfg, Topology topo, LinkStatsSet stats, ChannelRealization real,
              CMat pilot_noise);

  /// Samples topology, link stats, channels, and pilot noise from rng.
  static SystemModel draw(const ScenarioConfig& cfg, Rng& rng);

  /// Same drop with the RISs removed (L = 0): identical direct channels and
  /// pilot noise, no cascades, no RIS static power.
  SystemModel without_ris() const;

  /// Same drop with different solver parameters.
  SystemModel with_solver(const SolverParams& solver) const;

  const ScenarioConfig& config() const { return cfg_; }
  const Topology& topology() const { return topo_; }
  const LinkStatsSet& link_stats() const { return stats_; }
  const ChannelRealization& realization() const { return real_; }
  double noise_var() const { return noise_var_; }
  double bandwidth_eff() const { return cfg_.bandwidth_hz * cfg_.prelog_factor(); }
  double qos_rate_bps() const { return cfg_.qos_min_rate_bps(); }

  /// Estimation pipeline under the pinned pilot noise.
  PhaseOutputs phase_outputs(const RisPhase& phase) const;

  /// Precoder, interference coefficients, rates, and power for a state.
  StateEval evaluate(const PhaseOutputs& po, const ApActivation& activation,
                     const Vec& power) const;

  StateEval evaluate(const NetworkState& state) const {
    return evaluate(phase_outputs(state.phase), state.activation, state.power);
  }

  /// Uniform down-scaling of `power` so the per-AP caps hold under this
  /// precoder (identity when already feasible).
  Vec project_power(const Precoder& precoder, const Vec& power) const;

 private:
  ScenarioConfig cfg_;
  Topology topo_;
  LinkStatsSet stats_;
  ChannelRealization real_;
  CMat pilot_noise_;  // M x K, CN(0, sigma_u^2) entries
  double noise_var_;
};

/// Relative slack used in feasibility checks throughout the optimizer.
inline constexpr double kFeasSlack = 1e-9;

}  // namespace cfris
