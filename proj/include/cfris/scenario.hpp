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

#include <array>
#include <iosfwd>
#include <vector>

#include "cfris/config.hpp"
#include "cfris/rng.hpp"

namespace cfris {

using Point3 = std::array<double, 3>;

inline double distance(const Point3& a, const Point3& b) {
  const double dx = a[0] - b[0], dy = a[1] - b[1], dz = a[2] - b[2];
  return std::sqrt(dx * dx + dy * dy + dz * dz);
}

/// Node placement and pairwise link distances for one drop.
struct Topology {
  std::vector<Point3> ap_positions;   // M
  std::vector<Point3> ue_positions;   // K
  std::vector<Point3> ris_positions;  // L
  std::vector<double> ris_boresight;  // L, azimuth (rad), toward the area center

  Mat d_ap_ue;   // M x K
  Mat d_ap_ris;  // M x L
  Mat d_ris_ue;  // L x K
};

enum class LinkKind { kApUe, kRisUe, kApRis };

/// Large-scale state of one link.
struct LinkStats {
  double beta = 0.0;      // linear large-scale gain
  double kappa = 0.0;     // linear Rician factor; 0 = Rayleigh
  bool los = false;
  bool pure_los = false;  // AP-RIS links: deterministic LoS-only channel
};

/// All per-link large-scale stats for a drop, indexed like the distance
/// matrices in Topology.
struct LinkStatsSet {
  std::vector<std::vector<LinkStats>> ap_ue;   // [m][k]
  std::vector<std::vector<LinkStats>> ap_ris;  // [m][l]
  std::vector<std::vector<LinkStats>> ris_ue;  // [l][k]
};

/// Log-distance pathloss, linear scale. d is clamped to the 1 m reference.
double pathloss_lin(const ScenarioConfig& cfg, double d_m);

/// (300 - d)/300 for 0 < d < 300 m, else 0. Rejects d <= 0.
double los_probability(double d_m);

/// Large-scale draw for a single link. AP-UE / RIS-UE: Bernoulli blockage
/// (prob = cfg.blockage_prob), then a distance-dependent LoS draw; on LoS the
/// Rician factor is 10^((13 - 0.03 d)/10), otherwise 0. AP-RIS links are
/// always pure LoS and consume no randomness.
LinkStats sample_link_stats(const ScenarioConfig& cfg, double d_m, LinkKind kind, Rng& rng);

/// Uniform placement over the D x D area at the configured heights.
/// Draw order: APs, then UEs, then RISs, each in index order.
Topology generate_topology(const ScenarioConfig& cfg, Rng& rng);

/// Stats for every link, drawn in the documented order (AP-UE by m-major,
/// then RIS-UE by l-major; AP-RIS links draw nothing).
LinkStatsSet sample_all_link_stats(const ScenarioConfig& cfg, const Topology& topo, Rng& rng);

/// Plain-text dump, one row per entity: kind index x y z.
void dump_topology(std::ostream& out, const Topology& topo);

}  // namespace cfris
