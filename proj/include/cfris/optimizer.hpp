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

#include <iosfwd>
#include <vector>

#include "cfris/ap_select.hpp"
#include "cfris/power_alloc.hpp"
#include "cfris/ris_opt.hpp"

namespace cfris {

/// Objective-evaluation counters per subproblem (complexity instrumentation).
struct EvalCounters {
  std::uint64_t ap_objective = 0;
  std::uint64_t power_subproblems = 0;
  std::uint64_t ris_fitness = 0;
};

/// One Dinkelbach outer iteration.
struct OuterRecord {
  int iter = 0;
  double alpha = 0;          // parameter used during this iteration's AO
  double sum_rate_bps = 0;   // f at the cycle output
  double total_power_w = 0;  // g at the cycle output
  double ee = 0;             // f/g
  int active_aps = 0;
  double obj_after_ap = 0;    // F = f - alpha*g after each sub-step
  double obj_after_power = 0;
  double obj_after_ris = 0;
  std::uint64_t ap_evals = 0;        // per-iteration counter deltas
  std::uint64_t power_solves = 0;
  std::uint64_t ris_evals = 0;
  double wall_ms = 0;
};

struct SolveTrace {
  std::vector<OuterRecord> rows;
  void write_csv(std::ostream& out, bool include_wall_time = true) const;
};

enum class SolveStatus { kOk, kInfeasibleQos, kSingularChannel };

struct SolveOptions {
  bool optimize_aps = true;
  bool optimize_power = true;
  bool optimize_ris = true;
};

struct SolveResult {
  SolveStatus status = SolveStatus::kOk;
  NetworkState state;
  StateEval eval;
  double ee = 0;
  double alpha_final = 0;
  bool certified = false;  // |f - alpha*g| <= dinkelbach_abs_tol * g at exit
  SolveTrace trace;
  EvalCounters counters;
};

/// Generic Dinkelbach iteration over a subtractive-form inner solver.
/// `eval(state)` returns {f, g}; `cycle(state, alpha)` improves the state in
/// place under fixed alpha and reports whether it changed anything. Stops on
/// an unchanged state (certificate f - alpha*g = 0 exactly), on
/// |delta alpha| <= max(abs_tol, tol*alpha), or at max_outer_iters.
template <class State, class EvalFn, class CycleFn>
std::vector<double> dinkelbach_loop(State& state, EvalFn&& eval, CycleFn&& cycle,
                                    const SolverParams& params) {
  auto [f, g] = eval(state);
  double alpha = f / g;
  std::vector<double> alphas{alpha};
  for (int t = 0; t < params.max_outer_iters; ++t) {
    const bool changed = cycle(state, alpha);
    auto [f_t, g_t] = eval(state);
    const double alpha_next = f_t / g_t;
    alphas.push_back(alpha_next);
    const double delta = std::abs(alpha_next - alpha);
    alpha = alpha_next;
    if (!changed) break;
    if (delta <= std::max(params.dinkelbach_abs_tol, params.dinkelbach_tol * std::abs(alpha)))
      break;
  }
  return alphas;
}

/// Heuristic-power initial state (all APs active, the given phases), repaired
/// to QoS feasibility. nullopt when the scenario is infeasible at full
/// activation.
std::optional<NetworkState> make_initial_state(const SystemModel& model, const RisPhase& phase);

/// One AP-selection / power / RIS-phase pass under fixed alpha. Sub-steps are
/// committed only when they improve F = f - alpha*g and stay feasible, so F
/// is non-decreasing. Returns whether the state changed.
bool ao_cycle(const SystemModel& model, NetworkState& state, double alpha,
              const SolveOptions& opts, Rng& rng, EvalCounters& counters,
              OuterRecord* record = nullptr);

/// Full solve: Dinkelbach outer loop around ao_cycle, starting from the
/// heuristic-power all-active state at `phase_init`.
SolveResult dinkelbach_solve(const SystemModel& model, const RisPhase& phase_init,
                             const SolveOptions& opts, Rng& rng);

}  // namespace cfris
