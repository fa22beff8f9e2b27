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

#include "cfris/power_model.hpp"

namespace cfris {

double total_power(const ApActivation& activation, const Vec& per_ap_tx_w, double sum_rate_bps,
                   const PowerParams& params, int num_ris) {
  const int m_aps = activation.num_aps();
  const double rate_gbps = bps_to_gbps(sum_rate_bps);
  double p_ap = 0.0;
  double fh_var = 0.0;
  for (int m = 0; m < m_aps; ++m) {
    const bool on = activation.delta[m] != 0;
    p_ap += (1.0 - params.sleep_factor * (on ? 0.0 : 1.0)) * params.ap_fixed_w;
    if (on) {
      p_ap += per_ap_tx_w(m);
      fh_var += params.fh_per_gbps_w;
    }
  }
  const double p_cpu = params.cpu_fixed_w + rate_gbps * params.cpu_per_gbps_w;
  const double p_fh = m_aps * params.fh_fixed_w + rate_gbps * fh_var;
  const double p_ris = num_ris * params.ris_static_w;
  return p_ap + p_cpu + p_fh + p_ris;
}

double energy_efficiency(double sum_rate_bps, double total_power_w) {
  return sum_rate_bps / total_power_w;
}

PowerSplit split_power_coefficients(const ApActivation& activation, const PowerParams& params,
                                    int num_ris) {
  const int m_aps = activation.num_aps();
  const int active = activation.active_count();
  PowerSplit split;
  split.dyn_w_per_gbps = active * params.fh_per_gbps_w + params.cpu_per_gbps_w;
  // global fixed block (all-AP sums, matching the total_power accounting)
  const double fixed = m_aps * (1.0 - params.sleep_factor) * params.ap_fixed_w +
                       m_aps * params.fh_fixed_w + num_ris * params.ris_static_w +
                       params.cpu_fixed_w;
  split.stat_w = active * params.sleep_factor * params.ap_fixed_w + fixed;
  return split;
}

}  // namespace cfris
