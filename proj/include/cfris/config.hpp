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
#include <iosfwd>
#include <string>

#include "cfris/common.hpp"

namespace cfris {

/// Static power figures and the dormancy saving factor.
/// Defaults follow the reference deployment (W, W/Gbps).
struct PowerParams {
  double ap_fixed_w = 5.0;          // P_m^{AP,Fix}
  double cpu_fixed_w = 5.0;         // P_CPU^{Fix}
  double cpu_per_gbps_w = 0.1;      // P_CPU^{Pre}
  double fh_fixed_w = 0.825;        // P_m^{FH,Fix}
  double fh_per_gbps_w = 0.01;      // P_m^{FH,var}
  double ris_static_w = 0.064;      // P_l^{RIS}
  double sleep_factor = 0.7;        // dormancy saving factor
};

enum class SolverMode { kNearOptimal, kLowComplexity };

const char* to_string(SolverMode mode);
SolverMode solver_mode_from_string(const std::string& s);

struct SolverParams {
  // outer fractional loop
  double dinkelbach_tol = 1e-12;      // relative EE improvement threshold
  double dinkelbach_abs_tol = 1e-4;   // absolute threshold on the EE update (bits/J)
  int max_outer_iters = 30;
  double ao_tol = 1e-6;               // relative improvement of f - alpha*g per cycle
  int ao_max_cycles = 4;

  // SCA power allocation
  double sca_tol = 1e-4;
  int sca_max_iters = 100;
  int pg_max_iters = 600;             // projected-gradient steps per convex subproblem
  double pg_kkt_tol = 1e-6;           // projected-gradient-map norm, relative to scale

  // gradient projection over RIS phases
  double gp_tol = 1e-4;
  int gp_max_iters = 30;
  double fd_step = 1e-4;              // central-difference perturbation (rad)
  double armijo_init_step = 1.0;      // normalized by ||grad||_inf before use
  double armijo_shrink = 0.5;
  double armijo_slope = 1e-4;
  double armijo_min_step = 1e-10;

  // whale optimization
  int woa_population = 30;
  int woa_max_iters = 15;
  double woa_spiral_b = 1.0;

  // branch and bound
  std::int64_t bnb_node_cap = 1 << 22;

  double power_floor_frac = 1e-9;     // p_k >= frac * P_max^UE keeps logs defined
  bool heuristic_full_sum = false;    // full-sum variant of the power heuristic
  SolverMode mode = SolverMode::kLowComplexity;
};

/// All physical and algorithmic parameters of one scenario.
struct ScenarioConfig {
  int num_aps = 10;                  // M
  int num_ues = 5;                   // K
  int num_ris = 2;                   // L
  int ris_rows = 8;                  // N_z (vertical)
  int ris_cols = 8;                  // N_y (horizontal)
  double area_side_m = 500.0;        // D
  double carrier_freq_hz = 1.9e9;    // f_c
  double bandwidth_hz = 20e6;        // B
  double ris_element_spacing_m = 0;  // d_R; 0 resolves to lambda/2
  double ap_height_m = 12.5;
  double ue_height_m = 1.5;
  double ris_height_m = 13.5;
  int coherence_symbols = 1000;      // tau_c
  int training_symbols = 20;         // tau_t
  double pilot_power_w = 0.1;        // p_u
  double max_ap_power_w = 0.2;       // P_max
  double max_ue_power_w = 0.2;       // P_max^UE
  double qos_min_se = 1.0;           // xi_k as SE (bit/s/Hz); rate floor is qos_min_se * B
  double blockage_prob = 0.5;        // P(major blockage), AP-UE and RIS-UE links
  double pathloss_ref_db = -30.5;    // beta(dB) = ref - exp10 * log10(d / 1 m)
  double pathloss_exp_db = 36.7;
  double noise_figure_db = 9.0;
  bool apply_prelog = false;         // scale rates by (tau_c - tau_t)/tau_c
  std::uint64_t rng_seed = 1;

  PowerParams power;
  SolverParams solver;

  int ris_elements() const { return ris_rows * ris_cols; }  // N
  double wavelength_m() const { return kSpeedOfLight / carrier_freq_hz; }
  double ris_spacing_m() const {
    return ris_element_spacing_m > 0 ? ris_element_spacing_m : 0.5 * wavelength_m();
  }
  /// Thermal noise power over the system bandwidth, identical uplink/downlink.
  double noise_power_w() const {
    return dbm_to_watt(kBoltzmannNoiseDbmPerHz + noise_figure_db) * bandwidth_hz;
  }
  /// Per-UE rate floor in bit/s.
  double qos_min_rate_bps() const { return qos_min_se * bandwidth_hz; }
  double prelog_factor() const {
    if (!apply_prelog) return 1.0;
    return static_cast<double>(coherence_symbols - training_symbols) / coherence_symbols;
  }

  /// Throws std::invalid_argument on any violated invariant.
  void validate() const;
};

/// Reads a flat `key = value` text file ('#' comments). Unknown keys throw.
ScenarioConfig load_config(const std::string& path);
ScenarioConfig parse_config(std::istream& in, const std::string& origin = "<stream>");

/// Writes every key in the file format (the resolved-config manifest block).
void write_config(std::ostream& out, const ScenarioConfig& cfg);

}  // namespace cfris
