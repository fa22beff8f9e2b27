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
#include <optional>

#include "cfris/config.hpp"

namespace cfris {

/// Data of one power-allocation subproblem (activation and phases fixed).
struct PowerProblem {
  Mat gamma;              // K x K interference coefficients
  double noise_var = 0;   // sigma_d^2
  double bandwidth_eff = 0;  // B (prelog folded in)
  Vec c;                  // K cumulative beamforming gains
  Mat eta_active;         // |M_A| x K per-AP precoder powers |[v_k]_m|^2
  double p_max_ap = 0;
  double p_max_ue = 0;
  double qos_rate_bps = 0;
  double alpha = 0;            // Dinkelbach parameter, bit/J
  double p_dyn_per_bps = 0;    // rate-proportional power coefficient, W per bit/s
  double power_floor = 0;      // strict positivity floor on p_k

  int num_ues() const { return static_cast<int>(c.size()); }
  /// True sum rate f(p) in bit/s.
  double sum_rate_bps(const Vec& p) const;
  /// True subtractive objective f(p)(1 - alpha P_dyn) - alpha c^T p.
  double objective(const Vec& p) const;
  /// Feasibility against box, per-AP, and QoS constraints (relative slack).
  bool feasible(const Vec& p, double slack = 1e-9) const;
};

/// Concave lower bound of UE k's rate around p_s (bit/s) and its gradient.
/// Tight at p = p_s; exact everywhere when gamma row k is zero.
struct SurrogateEval {
  double value_bps = 0;
  Vec grad;  // d value / d p_j, (bit/s)/W
};
SurrogateEval rate_lower_bound(const Vec& p, const Vec& p_s, const Mat& gamma, double noise_var,
                               double bandwidth_eff, int k);

struct ConvexSolveResult {
  Vec p;
  bool feasible = false;
  double kkt_residual = 0;   // projected-gradient-map norm over scale
  int iterations = 0;
};

/// Maximizes the surrogate objective over the feasible polytope by projected
/// gradient ascent with backtracking; the projection is computed by Dykstra's
/// alternating method. The QoS constraint enters in the equivalent linear
/// form p_k - t_k sum_i gamma_ki p_i >= t_k sigma^2, t_k = 2^(xi/B) - 1.
/// Guarantees objective(p) >= objective(p_s) - 1e-9 relative and returns a
/// feasible point; infeasible constraint sets yield nullopt.
std::optional<ConvexSolveResult> solve_convex_subproblem(const PowerProblem& prob, const Vec& p_s,
                                                         const SolverParams& params);

/// Minimal QoS-feasible power point (componentwise) via the standard
/// fixed-point iteration p <- max(floor, T(p)); nullopt when the QoS targets
/// are unattainable under the caps.
std::optional<Vec> minimal_qos_power(const PowerProblem& prob);

/// Repairs a heuristic power vector that violates QoS by bisecting toward
/// the minimal QoS point along the feasible polytope.
std::optional<Vec> restore_feasible_power(const PowerProblem& prob, const Vec& p_init);

struct ScaResult {
  Vec p;
  bool feasible = false;
  int iterations = 0;
  std::uint64_t subproblem_solves = 0;
};

/// Algorithm: iterate surrogate construction and convex solves from p_init
/// until the relative power update falls below sca_tol. The true subtractive
/// objective is non-decreasing across iterations.
std::optional<ScaResult> sca_solve(const PowerProblem& prob, const Vec& p_init,
                                   const SolverParams& params);

}  // namespace cfris
