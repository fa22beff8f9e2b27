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

#include "cfris/power_alloc.hpp"

#include <vector>

namespace cfris {

namespace {
constexpr double kLn2 = 0.69314718055994530942;
}

double PowerProblem::sum_rate_bps(const Vec& p) const {
  double sum = 0.0;
  for (int k = 0; k < num_ues(); ++k) {
    const double d = gamma.row(k).dot(p.transpose()) + noise_var;
    sum += std::log2(1.0 + p(k) / d);
  }
  return bandwidth_eff * sum;
}

double PowerProblem::objective(const Vec& p) const {
  return sum_rate_bps(p) * (1.0 - alpha * p_dyn_per_bps) - alpha * c.dot(p);
}

bool PowerProblem::feasible(const Vec& p, double slack) const {
  for (int k = 0; k < num_ues(); ++k)
    if (!(p(k) > 0.0) || p(k) > p_max_ue * (1.0 + slack)) return false;
  for (Eigen::Index m = 0; m < eta_active.rows(); ++m)
    if (eta_active.row(m).dot(p.transpose()) > p_max_ap * (1.0 + slack)) return false;
  for (int k = 0; k < num_ues(); ++k) {
    const double d = gamma.row(k).dot(p.transpose()) + noise_var;
    if (bandwidth_eff * std::log2(1.0 + p(k) / d) < qos_rate_bps * (1.0 - slack)) return false;
  }
  return true;
}

SurrogateEval rate_lower_bound(const Vec& p, const Vec& p_s, const Mat& gamma, double noise_var,
                               double bandwidth_eff, int k) {
  const int n = static_cast<int>(p.size());
  const double d_s = gamma.row(k).dot(p_s.transpose()) + noise_var;
  const double d = gamma.row(k).dot(p.transpose()) + noise_var;
  const double total = p(k) + d;

  SurrogateEval out;
  out.value_bps = bandwidth_eff * (std::log2(total) - std::log2(d_s) -
                                   gamma.row(k).dot((p - p_s).transpose()) / (kLn2 * d_s));
  out.grad.resize(n);
  for (int j = 0; j < n; ++j) {
    const double own = (j == k) ? 1.0 : 0.0;
    out.grad(j) =
        bandwidth_eff * ((own + gamma(k, j)) / (kLn2 * total) - gamma(k, j) / (kLn2 * d_s));
  }
  return out;
}

namespace {

// Halfspace a^T p <= b.
struct Halfspace {
  Vec a;
  double b;
  double norm2;
};

struct Polytope {
  Vec lo, hi;
  std::vector<Halfspace> planes;

  Vec project_box(const Vec& p) const { return p.cwiseMax(lo).cwiseMin(hi); }

  bool contains(const Vec& p, double tol) const {
    if ((p.array() < lo.array() - tol).any() || (p.array() > hi.array() + tol).any()) return false;
    for (const auto& h : planes)
      if (h.a.dot(p) > h.b + tol * std::max(1.0, std::abs(h.b))) return false;
    return true;
  }

  // Dykstra's alternating projections; exact for this closed convex
  // intersection in the limit, iterated until the sweep movement is tiny.
  Vec project(const Vec& p) const {
    const int n_sets = 1 + static_cast<int>(planes.size());
    std::vector<Vec> corr(n_sets, Vec::Zero(p.size()));
    Vec x = p;
    const double scale = std::max(1.0, p.norm());
    for (int sweep = 0; sweep < 400; ++sweep) {
      double moved = 0.0;
      for (int s = 0; s < n_sets; ++s) {
        const Vec y = x + corr[s];
        Vec z;
        if (s == 0) {
          z = project_box(y);
        } else {
          const auto& h = planes[s - 1];
          const double viol = h.a.dot(y) - h.b;
          z = viol > 0.0 ? Vec(y - (viol / h.norm2) * h.a) : y;
        }
        corr[s] = y - z;
        moved = std::max(moved, (z - x).cwiseAbs().maxCoeff());
        x = z;
      }
      if (moved <= 1e-14 * scale) break;
    }
    return x;
  }
};

Polytope build_polytope(const PowerProblem& prob) {
  const int k_ues = prob.num_ues();
  Polytope poly;
  poly.lo = Vec::Constant(k_ues, prob.power_floor);
  poly.hi = Vec::Constant(k_ues, prob.p_max_ue);
  for (Eigen::Index m = 0; m < prob.eta_active.rows(); ++m) {
    Halfspace h;
    h.a = prob.eta_active.row(m).transpose();
    h.b = prob.p_max_ap;
    h.norm2 = h.a.squaredNorm();
    if (h.norm2 > 0.0) poly.planes.push_back(std::move(h));
  }
  if (prob.qos_rate_bps > 0.0) {
    const double t = std::exp2(prob.qos_rate_bps / prob.bandwidth_eff) - 1.0;
    for (int k = 0; k < k_ues; ++k) {
      // rate_k >= xi  <=>  p_k - t sum_i gamma_ki p_i >= t sigma^2
      Halfspace h;
      h.a = (t * prob.gamma.row(k)).transpose();
      h.a(k) -= 1.0;
      h.b = -t * prob.noise_var;
      h.norm2 = h.a.squaredNorm();
      poly.planes.push_back(std::move(h));
    }
  }
  return poly;
}

double surrogate_objective(const PowerProblem& prob, const Vec& p_s, const Vec& p, Vec* grad) {
  const double coef = 1.0 - prob.alpha * prob.p_dyn_per_bps;
  double value = -prob.alpha * prob.c.dot(p);
  if (grad) *grad = -prob.alpha * prob.c;
  for (int k = 0; k < prob.num_ues(); ++k) {
    const SurrogateEval ev =
        rate_lower_bound(p, p_s, prob.gamma, prob.noise_var, prob.bandwidth_eff, k);
    value += coef * ev.value_bps;
    if (grad) *grad += coef * ev.grad;
  }
  return value;
}

}  // namespace

std::optional<ConvexSolveResult> solve_convex_subproblem(const PowerProblem& prob, const Vec& p_s,
                                                         const SolverParams& params) {
  if (1.0 - prob.alpha * prob.p_dyn_per_bps <= 0.0) {
    // surrogate would turn convex; leave the allocation untouched (ascent
    // safeguard upstream keeps monotonicity)
    ConvexSolveResult res;
    res.p = p_s;
    res.feasible = prob.feasible(p_s);
    return res;
  }
  const Polytope poly = build_polytope(prob);
  Vec x = poly.project(p_s);
  if (!poly.contains(x, 1e-7 * std::max(1.0, prob.p_max_ue))) return std::nullopt;

  Vec grad;
  double fx = surrogate_objective(prob, p_s, x, &grad);
  const double grad_scale = 1.0 + grad.norm();
  const double step_ref = prob.p_max_ue / grad_scale;

  ConvexSolveResult res;
  double step = step_ref;
  int it = 0;
  for (; it < params.pg_max_iters; ++it) {
    const Vec y = poly.project(x + step_ref * grad);
    res.kkt_residual = (y - x).norm() / (step_ref * grad_scale);
    if (res.kkt_residual < params.pg_kkt_tol) break;

    bool advanced = false;
    for (int bt = 0; bt < 60; ++bt) {
      const Vec cand = poly.project(x + step * grad);
      const Vec dir = cand - x;
      if (dir.norm() == 0.0) break;
      Vec grad_cand;
      const double f_cand = surrogate_objective(prob, p_s, cand, &grad_cand);
      if (f_cand >= fx + 1e-4 * grad.dot(dir)) {
        x = cand;
        fx = f_cand;
        grad = std::move(grad_cand);
        advanced = true;
        step *= 2.0;  // allow growth after success
        break;
      }
      step *= 0.5;
    }
    if (!advanced) break;
  }
  res.iterations = it;
  res.p = x;
  res.feasible = prob.feasible(x, 1e-7);
  return res;
}

std::optional<Vec> minimal_qos_power(const PowerProblem& prob) {
  const int k_ues = prob.num_ues();
  if (prob.qos_rate_bps <= 0.0) return Vec::Constant(k_ues, prob.power_floor);
  const double t = std::exp2(prob.qos_rate_bps / prob.bandwidth_eff) - 1.0;
  Vec p = Vec::Constant(k_ues, prob.power_floor);
  for (int it = 0; it < 20000; ++it) {
    Vec next(k_ues);
    for (int k = 0; k < k_ues; ++k)
      next(k) = std::max(prob.power_floor,
                         t * (prob.gamma.row(k).dot(p.transpose()) + prob.noise_var));
    const bool converged = ((next - p).cwiseAbs().array() <= 1e-14 * next.array().max(1e-300)).all();
    p = next;
    if ((p.array() > prob.p_max_ue * (1.0 + 1e-9)).any()) return std::nullopt;
    if (converged) break;
  }
  for (Eigen::Index m = 0; m < prob.eta_active.rows(); ++m)
    if (prob.eta_active.row(m).dot(p.transpose()) > prob.p_max_ap * (1.0 + 1e-9))
      return std::nullopt;
  return p;
}

std::optional<Vec> restore_feasible_power(const PowerProblem& prob, const Vec& p_init) {
  Vec p = p_init.cwiseMax(prob.power_floor).cwiseMin(prob.p_max_ue);
  if (prob.feasible(p)) return p;
  const auto p_min = minimal_qos_power(prob);
  if (!p_min) return std::nullopt;
  if (!prob.feasible(*p_min, 1e-7)) return std::nullopt;
  // feasible lambdas form an interval ending at 1 (all constraints affine)
  double lo = 0.0, hi = 1.0;
  for (int it = 0; it < 60; ++it) {
    const double mid = 0.5 * (lo + hi);
    const Vec cand = (1.0 - mid) * p + mid * (*p_min);
    if (prob.feasible(cand))
      hi = mid;
    else
      lo = mid;
  }
  const Vec cand = (1.0 - hi) * p + hi * (*p_min);
  return prob.feasible(cand) ? std::optional<Vec>(cand) : std::optional<Vec>(*p_min);
}

std::optional<ScaResult> sca_solve(const PowerProblem& prob, const Vec& p_init,
                                   const SolverParams& params) {
  auto p0 = restore_feasible_power(prob, p_init);
  if (!p0) return std::nullopt;

  ScaResult res;
  res.p = *p0;
  double best_obj = prob.objective(res.p);
  for (int s = 0; s < params.sca_max_iters; ++s) {
    auto sub = solve_convex_subproblem(prob, res.p, params);
    ++res.subproblem_solves;
    if (!sub || !sub->feasible) break;
    res.iterations = s + 1;
    const Vec prev = res.p;
    // commit only non-decreasing true-objective moves (minorize-maximize)
    const double obj = prob.objective(sub->p);
    if (obj >= best_obj) {
      res.p = sub->p;
      best_obj = obj;
    }
    const double rel = (sub->p - prev).norm() / std::max(prev.norm(), 1e-300);
    if (rel < params.sca_tol) break;
  }
  res.feasible = prob.feasible(res.p, 1e-7);
  return res;
}

}  // namespace cfris
