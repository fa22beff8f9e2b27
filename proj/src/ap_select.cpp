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

#include "cfris/ap_select.hpp"

#include <stdexcept>

namespace cfris {

namespace {

// (fewer active APs, then lexicographically smaller delta) wins equal objectives
bool tie_better(const ApActivation& a, const ApActivation& b) {
  const int ca = a.active_count(), cb = b.active_count();
  if (ca != cb) return ca < cb;
  return a.delta < b.delta;
}

bool candidate_better(const CandidateScore& cand, const ApActivation& cand_act, double best_obj,
                      const ApActivation& best_act, bool have_best) {
  if (!cand.feasible) return false;
  if (!have_best) return true;
  if (cand.objective != best_obj) return cand.objective > best_obj;
  return tie_better(cand_act, best_act);
}

}  // namespace

CandidateScore score_activation(const ApSelectContext& ctx, const ApActivation& activation) {
  CandidateScore score;
  if (activation.active_count() < ctx.model->config().num_ues) return score;
  auto pre = zf_precoder(ctx.phase->g_hat, activation);
  if (!pre) return score;
  score.projected_power = ctx.model->project_power(*pre, ctx.power);
  score.eval = ctx.model->evaluate(*ctx.phase, activation, score.projected_power);
  if (!score.eval.feasible()) return score;
  score.feasible = true;
  score.objective = score.eval.objective(ctx.alpha);
  return score;
}

ApSelectResult exhaustive_select(const ApSelectContext& ctx) {
  const int m_aps = ctx.model->config().num_aps;
  if (m_aps > 14) throw std::invalid_argument("exhaustive_select: M must be <= 14");
  ApSelectResult best;
  for (std::uint64_t mask = 0; mask < (1ULL << m_aps); ++mask) {
    ApActivation act;
    act.delta.resize(m_aps);
    for (int m = 0; m < m_aps; ++m) act.delta[m] = (mask >> m) & 1ULL;
    if (act.active_count() < ctx.model->config().num_ues) continue;
    const CandidateScore score = score_activation(ctx, act);
    ++best.evaluations;
    if (candidate_better(score, act, best.objective, best.activation, best.feasible)) {
      best.feasible = true;
      best.activation = act;
      best.objective = score.objective;
      best.projected_power = score.projected_power;
    }
  }
  return best;
}

namespace {

struct BnbState {
  const ApSelectContext* ctx;
  ApSelectResult result;
  std::int64_t node_cap;
  int m_aps;
  int k_ues;

  // Optimistic completion value: rate with every undecided AP active, power
  // with every undecided AP asleep and zero transmit.
  double node_bound(const ApActivation& partial, int depth) {
    ApActivation optimistic = partial;
    for (int m = depth; m < m_aps; ++m) optimistic.delta[m] = 1;
    auto pre = zf_precoder(ctx->phase->g_hat, optimistic);
    if (!pre) return std::numeric_limits<double>::infinity();  // rate bound unavailable
    const Vec p = ctx->model->project_power(*pre, ctx->power);
    const StateEval ev = ctx->model->evaluate(*ctx->phase, optimistic, p);
    const double f_max = ev.sum_rate_bps;

    ApActivation pessimistic = partial;
    for (int m = depth; m < m_aps; ++m) pessimistic.delta[m] = 0;
    const PowerSplit split = split_power_coefficients(
        pessimistic, ctx->model->config().power, ctx->model->config().num_ris);
    const double coef = 1.0 - ctx->alpha * split.dyn_w_per_bps();
    if (coef <= 0.0) return std::numeric_limits<double>::infinity();
    return f_max * coef - ctx->alpha * split.stat_w;
  }

  void dfs(ApActivation& partial, int depth, int active_so_far) {
    if (!result.bound_proven) return;
    if (++result.nodes > static_cast<std::uint64_t>(node_cap)) {
      result.bound_proven = false;
      return;
    }
    if (active_so_far + (m_aps - depth) < k_ues) return;  // cannot reach |M_A| >= K
    if (depth == m_aps) {
      const CandidateScore score = score_activation(*ctx, partial);
      ++result.evaluations;
      if (candidate_better(score, partial, result.objective, result.activation,
                           result.feasible)) {
        result.feasible = true;
        result.activation = partial;
        result.objective = score.objective;
        result.projected_power = score.projected_power;
      }
      return;
    }
    if (result.feasible && node_bound(partial, depth) <= result.objective) return;
    partial.delta[depth] = 1;
    dfs(partial, depth + 1, active_so_far + 1);
    partial.delta[depth] = 0;
    dfs(partial, depth + 1, active_so_far);
    partial.delta[depth] = 1;
  }
};

}  // namespace

ApSelectResult bnb_select(const ApSelectContext& ctx, std::int64_t node_cap) {
  BnbState bnb;
  bnb.ctx = &ctx;
  bnb.node_cap = node_cap;
  bnb.m_aps = ctx.model->config().num_aps;
  bnb.k_ues = ctx.model->config().num_ues;

  // all-active incumbent; it is always in the search space
  ApActivation all = ApActivation::all_active(bnb.m_aps);
  const CandidateScore base = score_activation(ctx, all);
  ++bnb.result.evaluations;
  if (base.feasible) {
    bnb.result.feasible = true;
    bnb.result.activation = all;
    bnb.result.objective = base.objective;
    bnb.result.projected_power = base.projected_power;
  }
  ApActivation partial = all;
  bnb.dfs(partial, 0, 0);
  return bnb.result;
}

ApSelectResult greedy_select(const ApSelectContext& ctx) {
  const int m_aps = ctx.model->config().num_aps;
  const int k_ues = ctx.model->config().num_ues;
  ApSelectResult res;

  ApActivation current = ApActivation::all_active(m_aps);
  CandidateScore cur_score = score_activation(ctx, current);
  ++res.evaluations;
  if (!cur_score.feasible) return res;  // all-active infeasible: nothing to improve on
  res.feasible = true;
  res.activation = current;
  res.objective = cur_score.objective;
  res.projected_power = cur_score.projected_power;

  while (current.active_count() - 1 >= k_ues) {
    int best_m = -1;
    CandidateScore best;
    for (int m = 0; m < m_aps; ++m) {
      if (!current.delta[m]) continue;
      ApActivation cand = current;
      cand.delta[m] = 0;
      const CandidateScore score = score_activation(ctx, cand);
      ++res.evaluations;
      if (!score.feasible) continue;  // QoS or rank lost: not in the candidate set
      if (best_m < 0 || score.objective > best.objective) {
        best_m = m;
        best = score;
      }
    }
    if (best_m < 0) break;                       // candidate set empty
    if (!(best.objective > res.objective)) break;  // no strict improvement
    current.delta[best_m] = 0;
    res.activation = current;
    res.objective = best.objective;
    res.projected_power = best.projected_power;
  }
  return res;
}

}  // namespace cfris
