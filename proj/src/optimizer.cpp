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

#include "cfris/optimizer.hpp"

#include <chrono>
#include <ostream>

namespace cfris {

void SolveTrace::write_csv(std::ostream& out, bool include_wall_time) const {
  out << "iter,alpha,sum_rate_bps,total_power_w,ee,active_aps,obj_after_ap,obj_after_power,"
         "obj_after_ris,ap_evals,power_solves,ris_evals";
  if (include_wall_time) out << ",wall_ms";
  out << "\n";
  out.precision(17);
  for (const auto& r : rows) {
    out << r.iter << "," << r.alpha << "," << r.sum_rate_bps << "," << r.total_power_w << ","
        << r.ee << "," << r.active_aps << "," << r.obj_after_ap << "," << r.obj_after_power << ","
        << r.obj_after_ris << "," << r.ap_evals << "," << r.power_solves << "," << r.ris_evals;
    if (include_wall_time) out << "," << r.wall_ms;
    out << "\n";
  }
}

namespace {

PowerProblem make_power_problem(const SystemModel& model, const StateEval& ev, double alpha) {
  const ScenarioConfig& cfg = model.config();
  PowerProblem prob;
  prob.gamma = ev.gamma;
  prob.noise_var = model.noise_var();
  prob.bandwidth_eff = model.bandwidth_eff();
  prob.c = ev.precoder.c;
  prob.eta_active = ev.precoder.v_active.cwiseAbs2();
  prob.p_max_ap = cfg.max_ap_power_w;
  prob.p_max_ue = cfg.max_ue_power_w;
  prob.qos_rate_bps = model.qos_rate_bps();
  prob.alpha = alpha;
  const PowerSplit split = split_power_coefficients(
      ApActivation::from_active_indices(cfg.num_aps, ev.precoder.active), cfg.power, cfg.num_ris);
  prob.p_dyn_per_bps = split.dyn_w_per_bps();
  // the power parameters live on the received-power scale (noise-var sized),
  // orders of magnitude below P_max^UE; the floor must sit below them
  prob.power_floor = cfg.solver.power_floor_frac * model.noise_var();
  return prob;
}

}  // namespace

std::optional<NetworkState> make_initial_state(const SystemModel& model, const RisPhase& phase) {
  const ScenarioConfig& cfg = model.config();
  NetworkState state;
  state.activation = ApActivation::all_active(cfg.num_aps);
  state.phase = phase;
  const PhaseOutputs po = model.phase_outputs(phase);
  auto pre = zf_precoder(po.g_hat, state.activation);
  if (!pre) return std::nullopt;
  const Vec p_heur = heuristic_power(*pre, cfg.max_ap_power_w, cfg.max_ue_power_w,
                                     cfg.solver.heuristic_full_sum);
  StateEval ev = model.evaluate(po, state.activation, p_heur);
  PowerProblem prob = make_power_problem(model, ev, 0.0);
  const auto repaired = restore_feasible_power(prob, p_heur);
  if (!repaired) return std::nullopt;
  state.power = *repaired;
  return state;
}

bool ao_cycle(const SystemModel& model, NetworkState& state, double alpha,
              const SolveOptions& opts, Rng& rng, EvalCounters& counters, OuterRecord* record) {
  const ScenarioConfig& cfg = model.config();
  PhaseOutputs po = model.phase_outputs(state.phase);
  StateEval cur = model.evaluate(po, state.activation, state.power);
  double objective = cur.objective(alpha);
  bool any_change = false;
  // gains below the AO tolerance (scaled by the sum rate, the objective's
  // natural magnitude) count as converged; this lets the state reach an exact
  // fixed point, which is the Dinkelbach stopping certificate
  auto commit_bar = [&] {
    return objective + cfg.solver.ao_tol * std::max(1.0, cur.sum_rate_bps);
  };

  for (int cycle = 0; cycle < cfg.solver.ao_max_cycles; ++cycle) {
    const double obj_at_cycle_start = objective;
    bool changed = false;

    if (opts.optimize_aps) {
      ApSelectContext ctx{&model, &po, state.power, alpha};
      const ApSelectResult sel = cfg.solver.mode == SolverMode::kNearOptimal
                                     ? bnb_select(ctx, cfg.solver.bnb_node_cap)
                                     : greedy_select(ctx);
      counters.ap_objective += sel.evaluations;
      if (sel.feasible && !(sel.activation == state.activation) &&
          sel.objective > commit_bar()) {
        state.activation = sel.activation;
        state.power = sel.projected_power;
        cur = model.evaluate(po, state.activation, state.power);
        objective = cur.objective(alpha);
        changed = true;
      }
    }
    if (record && cycle == 0) record->obj_after_ap = objective;

    if (opts.optimize_power) {
      const PowerProblem prob = make_power_problem(model, cur, alpha);
      const auto sca = sca_solve(prob, state.power, cfg.solver);
      if (sca) counters.power_subproblems += sca->subproblem_solves;
      if (sca && sca->feasible) {
        const StateEval ev = model.evaluate(po, state.activation, sca->p);
        if (ev.feasible() && ev.objective(alpha) > commit_bar()) {
          state.power = sca->p;
          cur = ev;
          objective = ev.objective(alpha);
          changed = true;
        }
      }
    }
    if (record && cycle == 0) record->obj_after_power = objective;

    // re-running the phase search is pointless when the repeat cycle changed
    // neither the active set nor the allocation it was last solved for
    const bool ris_context_fresh = cycle == 0 || changed;
    if (opts.optimize_ris && ris_context_fresh && cfg.num_ris * cfg.ris_elements() > 0) {
      const PowerProblem prob = make_power_problem(model, cur, alpha);
      const bool sum_rate_valid = 1.0 - alpha * prob.p_dyn_per_bps > 0.0;
      RisFitness fitness(model, state.activation, state.power, alpha, !sum_rate_valid);
      const auto fn = [&fitness](const Vec& theta) { return fitness(theta); };
      // common random numbers across invocations: an unchanged context then
      // reproduces the same search, so the state can reach an exact fixed
      // point and the Dinkelbach certificate closes
      Rng woa_rng = rng.fork(17);
      const RisOptResult opt =
          cfg.solver.mode == SolverMode::kNearOptimal
              ? gp_optimize(fn, state.phase.angles, cfg.solver)
              : woa_optimize(fn, state.phase.angles, cfg.solver, woa_rng);
      counters.ris_fitness += fitness.evaluations();
      RisPhase cand;
      cand.elements_per_ris = cfg.ris_elements();
      cand.angles = opt.theta;
      const PhaseOutputs po_cand = model.phase_outputs(cand);
      // the precoder moved with the phases: re-project the power before the
      // accept test so per-AP caps and QoS are honored by the committed state
      auto pre = zf_precoder(po_cand.g_hat, state.activation);
      if (pre) {
        const Vec p_proj = model.project_power(*pre, state.power);
        const StateEval ev = model.evaluate(po_cand, state.activation, p_proj);
        if (ev.feasible() && ev.objective(alpha) > commit_bar()) {
          state.phase = cand;
          state.power = p_proj;
          po = po_cand;
          cur = ev;
          objective = ev.objective(alpha);
          changed = true;
        }
      }
    }
    if (record && cycle == 0) record->obj_after_ris = objective;

    if (!changed) break;
    any_change = true;
    if (objective - obj_at_cycle_start <= cfg.solver.ao_tol * std::max(1.0, cur.sum_rate_bps))
      break;
  }
  return any_change;
}

SolveResult dinkelbach_solve(const SystemModel& model, const RisPhase& phase_init,
                             const SolveOptions& opts, Rng& rng) {
  SolveResult res;
  auto init = make_initial_state(model, phase_init);
  if (!init) {
    res.status = SolveStatus::kInfeasibleQos;
    return res;
  }
  NetworkState state = std::move(*init);
  StateEval ev = model.evaluate(state);
  if (!ev.feasible()) {
    res.status = SolveStatus::kInfeasibleQos;
    return res;
  }

  const SolverParams& sp = model.config().solver;
  double alpha = ev.ee;
  double best_ee = ev.ee;
  NetworkState best_state = state;
  StateEval best_eval = ev;
  bool certified = false;

  EvalCounters before = res.counters;
  for (int t = 0; t < sp.max_outer_iters; ++t) {
    OuterRecord rec;
    rec.iter = t;
    rec.alpha = alpha;
    const auto t0 = std::chrono::steady_clock::now();
    const bool changed = ao_cycle(model, state, alpha, opts, rng, res.counters, &rec);
    const auto t1 = std::chrono::steady_clock::now();
    ev = model.evaluate(state);

    rec.sum_rate_bps = ev.sum_rate_bps;
    rec.total_power_w = ev.total_power_w;
    rec.ee = ev.ee;
    rec.active_aps = state.activation.active_count();
    rec.ap_evals = res.counters.ap_objective - before.ap_objective;
    rec.power_solves = res.counters.power_subproblems - before.power_subproblems;
    rec.ris_evals = res.counters.ris_fitness - before.ris_fitness;
    rec.wall_ms = std::chrono::duration<double, std::milli>(t1 - t0).count();
    before = res.counters;
    res.trace.rows.push_back(rec);

    if (ev.ee > best_ee) {
      best_ee = ev.ee;
      best_state = state;
      best_eval = ev;
    }
    const double alpha_next = ev.ee;
    const double delta = std::abs(alpha_next - alpha);
    alpha = alpha_next;
    if (!changed || delta <= std::max(sp.dinkelbach_abs_tol, sp.dinkelbach_tol * alpha)) {
      certified = delta <= sp.dinkelbach_abs_tol || !changed;
      break;
    }
  }

  res.status = SolveStatus::kOk;
  res.state = std::move(best_state);
  res.eval = std::move(best_eval);
  res.ee = best_ee;
  res.alpha_final = alpha;
  res.certified = certified;
  return res;
}

}  // namespace cfris
