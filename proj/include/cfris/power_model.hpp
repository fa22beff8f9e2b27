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

#include "cfris/config.hpp"
#include "cfris/precoding.hpp"

namespace cfris {

/// Total consumed power in W. Sleeping APs keep (1 - sleep_factor) of their
/// fixed power; FH fixed power is charged for every AP regardless of state;
/// rate-proportional terms use the sum rate in Gbps.
double total_power(const ApActivation& activation, const Vec& per_ap_tx_w, double sum_rate_bps,
                   const PowerParams& params, int num_ris);

/// EE = rate / power, bit/J.
double energy_efficiency(double sum_rate_bps, double total_power_w);

/// Coefficients of the affine decomposition
///   total = sum_k c_k p_k + sum_rate_gbps * dyn_w_per_gbps + stat_w.
struct PowerSplit {
  double dyn_w_per_gbps = 0.0;  // FH variable over active APs + CPU precoding
  double stat_w = 0.0;          // active-AP dormancy share + global fixed block
  double dyn_w_per_bps() const { return dyn_w_per_gbps * 1e-9; }
};

PowerSplit split_power_coefficients(const ApActivation& activation, const PowerParams& params,
                                    int num_ris);

}  // namespace cfris
