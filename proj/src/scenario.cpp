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

#include "cfris/scenario.hpp"

#include <ostream>
#include <stdexcept>

namespace cfris {

double pathloss_lin(const ScenarioConfig& cfg, double d_m) {
  const double d = std::max(d_m, 1.0);
  return db_to_lin(cfg.pathloss_ref_db - cfg.pathloss_exp_db * std::log10(d));
}

double los_probability(double d_m) {
  if (d_m <= 0.0) throw std::invalid_argument("los_probability: distance must be > 0");
  if (d_m >= 300.0) return 0.0;
  return (300.0 - d_m) / 300.0;
}

LinkStats sample_link_stats(const ScenarioConfig& cfg, double d_m, LinkKind kind, Rng& rng) {
  LinkStats s;
  s.beta = pathloss_lin(cfg, d_m);
  if (kind == LinkKind::kApRis) {
    // Elevated endpoints: deterministic LoS-only channel, exempt from blockage.
    s.los = true;
    s.pure_los = true;
    return s;
  }
  const bool blocked = rng.bernoulli(cfg.blockage_prob);
  if (!blocked && rng.bernoulli(los_probability(d_m))) {
    s.los = true;
    s.kappa = db_to_lin(13.0 - 0.03 * d_m);
  }
  return s;
}

Topology generate_topology(const ScenarioConfig& cfg, Rng& rng) {
  cfg.validate();
  Topology topo;
  const double D = cfg.area_side_m;
  auto draw = [&](double h) -> Point3 {
    const double x = rng.uniform(0.0, D);
    const double y = rng.uniform(0.0, D);
    return {x, y, h};
  };
  topo.ap_positions.reserve(cfg.num_aps);
  for (int m = 0; m < cfg.num_aps; ++m) topo.ap_positions.push_back(draw(cfg.ap_height_m));
  topo.ue_positions.reserve(cfg.num_ues);
  for (int k = 0; k < cfg.num_ues; ++k) topo.ue_positions.push_back(draw(cfg.ue_height_m));
  topo.ris_positions.reserve(cfg.num_ris);
  topo.ris_boresight.reserve(cfg.num_ris);
  for (int l = 0; l < cfg.num_ris; ++l) {
    const Point3 p = draw(cfg.ris_height_m);
    topo.ris_positions.push_back(p);
    topo.ris_boresight.push_back(std::atan2(0.5 * D - p[1], 0.5 * D - p[0]));
  }

  topo.d_ap_ue.resize(cfg.num_aps, cfg.num_ues);
  for (int m = 0; m < cfg.num_aps; ++m)
    for (int k = 0; k < cfg.num_ues; ++k)
      topo.d_ap_ue(m, k) = distance(topo.ap_positions[m], topo.ue_positions[k]);
  topo.d_ap_ris.resize(cfg.num_aps, cfg.num_ris);
  for (int m = 0; m < cfg.num_aps; ++m)
    for (int l = 0; l < cfg.num_ris; ++l)
      topo.d_ap_ris(m, l) = distance(topo.ap_positions[m], topo.ris_positions[l]);
  topo.d_ris_ue.resize(cfg.num_ris, cfg.num_ues);
  for (int l = 0; l < cfg.num_ris; ++l)
    for (int k = 0; k < cfg.num_ues; ++k)
      topo.d_ris_ue(l, k) = distance(topo.ris_positions[l], topo.ue_positions[k]);
  return topo;
}

LinkStatsSet sample_all_link_stats(const ScenarioConfig& cfg, const Topology& topo, Rng& rng) {
  LinkStatsSet set;
  set.ap_ue.resize(cfg.num_aps);
  for (int m = 0; m < cfg.num_aps; ++m) {
    set.ap_ue[m].resize(cfg.num_ues);
    for (int k = 0; k < cfg.num_ues; ++k)
      set.ap_ue[m][k] = sample_link_stats(cfg, topo.d_ap_ue(m, k), LinkKind::kApUe, rng);
  }
  set.ap_ris.resize(cfg.num_aps);
  for (int m = 0; m < cfg.num_aps; ++m) {
    set.ap_ris[m].resize(cfg.num_ris);
    for (int l = 0; l < cfg.num_ris; ++l)
      set.ap_ris[m][l] = sample_link_stats(cfg, topo.d_ap_ris(m, l), LinkKind::kApRis, rng);
  }
  set.ris_ue.resize(cfg.num_ris);
  for (int l = 0; l < cfg.num_ris; ++l) {
    set.ris_ue[l].resize(cfg.num_ues);
    for (int k = 0; k < cfg.num_ues; ++k)
      set.ris_ue[l][k] = sample_link_stats(cfg, topo.d_ris_ue(l, k), LinkKind::kRisUe, rng);
  }
  return set;
}

void dump_topology(std::ostream& out, const Topology& topo) {
  out.precision(17);
  out << "# entity index x y z\n";
  for (size_t m = 0; m < topo.ap_positions.size(); ++m) {
    const auto& p = topo.ap_positions[m];
    out << "ap " << m << " " << p[0] << " " << p[1] << " " << p[2] << "\n";
  }
  for (size_t k = 0; k < topo.ue_positions.size(); ++k) {
    const auto& p = topo.ue_positions[k];
    out << "ue " << k << " " << p[0] << " " << p[1] << " " << p[2] << "\n";
  }
  for (size_t l = 0; l < topo.ris_positions.size(); ++l) {
    const auto& p = topo.ris_positions[l];
    out << "ris " << l << " " << p[0] << " " << p[1] << " " << p[2] << "\n";
  }
}

}  // namespace cfris
