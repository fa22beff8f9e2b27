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

#include "cfris/system.hpp"

namespace cfris {

/// Inputs of the AP-activation subproblem: phases and power fixed.
/// Candidates are scored with the incumbent power projected to the per-AP
/// caps by uniform scaling; the QoS check uses the same projected power.
struct ApSelectContext {
  const SystemModel* model = nullptr;
  const PhaseOutputs* phase = nullptr;
  Vec power;      // incumbent allocation
  double alpha = 0;
};

struct CandidateScore {
  bool feasible = false;
  double objective = -std::numeric_limits<double>::infinity();  // f - alpha*g
  Vec projected_power;
  StateEval eval;
};

CandidateScore score_activation(const ApSelectContext& ctx, const ApActivation& activation);

struct ApSelectResult {
  bool feasible = false;           // some QoS-feasible candidate exists
  ApActivation activation;
  double objective = -std::numeric_limits<double>::infinity();
  Vec projected_power;
  bool bound_proven = true;        // BnB only: false when the node cap hit
  std::uint64_t evaluations = 0;   // objective evaluations performed
  std::uint64_t nodes = 0;         // BnB only
};

/// Ground-truth oracle: evaluates every activation with |M_A| >= K (M <= 14).
/// Ties break toward fewer active APs, then lexicographically smaller masks.
ApSelectResult exhaustive_select(const ApSelectContext& ctx);

/// Depth-first branch and bound. The node bound decouples the optimism of
/// the two objective terms: undecided APs count as active for the rate and
/// as asleep (zero transmit) for the power.
ApSelectResult bnb_select(const ApSelectContext& ctx, std::int64_t node_cap);

/// Greedy turn-off heuristic: starting all-active, repeatedly sleeps the AP
/// whose removal best improves f - alpha*g while every UE stays above QoS,
/// stopping when no removal improves.
ApSelectResult greedy_select(const ApSelectContext& ctx);

}  // namespace cfris
