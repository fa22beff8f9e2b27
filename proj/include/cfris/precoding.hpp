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

#include <optional>
#include <vector>

#include "cfris/common.hpp"

namespace cfris {

/// Binary AP on/off mask. ZF over the active set needs |active| >= K.
struct ApActivation {
  std::vector<std::uint8_t> delta;  // length M, 0/1

  static ApActivation all_active(int m) { return {std::vector<std::uint8_t>(m, 1)}; }
  static ApActivation from_active_indices(int m, const std::vector<int>& idx);
  int num_aps() const { return static_cast<int>(delta.size()); }
  int active_count() const;
  std::vector<int> active_indices() const;
  bool operator==(const ApActivation& other) const { return delta == other.delta; }
};

/// ZF precoder restricted to the active AP rows. `v_active` holds the rows of
/// V = G_hat^* (G_hat^T Delta G_hat^*)^{-1} at the active APs; inactive rows
/// are identically zero and never transmitted.
struct Precoder {
  std::vector<int> active;   // row index map, size |M_A|
  CMat v_active;             // |M_A| x K
  Vec c;                     // K, c_k = sum_m |[v_k]_m|^2 over active APs
  double cond = 0.0;         // condition number of the Gram matrix
};

inline constexpr double kGramConditionLimit = 1e12;

/// Returns nullopt when the active-set Gram matrix has condition number above
/// kGramConditionLimit (infeasible-activation signal for AP search).
std::optional<Precoder> zf_precoder(const CMat& g_hat, const ApActivation& activation);

/// ZF-based power initialization: p_k = P_max / max_m sum_{i=k..K} eta_{mi}
/// with eta_{mi} = |[v_i]_m|^2, evaluated on the realized estimate. The
/// printed tail sum does not by itself keep per-AP powers under P_max, so the
/// result is clipped to (0, P_max^UE] and uniformly rescaled to the per-AP
/// cap (a no-op under the full-sum variant).
Vec heuristic_power(const Precoder& precoder, double p_max, double p_max_ue,
                    bool full_sum = false);

/// Error-induced interference coefficients gamma[k][i] of the imperfect-CSI
/// SINR, conditional on the realized estimate:
/// gamma_k = diag(V^H Delta conj(C_k) Delta V), real nonnegative.
/// err_cov[k] is the full M x M error covariance E[(g-g_hat)(g-g_hat)^H].
Mat error_interference(const Precoder& precoder, const std::vector<CMat>& err_cov);

/// Rates and transmit powers for a given allocation.
struct RateReport {
  Vec sinr;          // K
  Vec rate_se;       // K, bit/s/Hz (prelog applied)
  double sum_rate_bps = 0.0;
  Vec per_ap_tx_w;   // M (zeros at inactive APs)
  Vec c;             // K, cumulative beamforming gains
};

/// SINR_k = p_k / (sum_i p_i gamma_{k,i} + sigma_d^2).
RateReport rate_report(const Vec& power, const Mat& gamma, double noise_var, double bandwidth_hz,
                       const Precoder& precoder, int num_aps, double prelog = 1.0);

}  // namespace cfris
