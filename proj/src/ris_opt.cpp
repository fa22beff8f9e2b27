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

#include "cfris/ris_opt.hpp"

#include <stdexcept>

namespace cfris {

double RisFitness::operator()(const Vec& theta) const {
  ++evals_;
  RisPhase phase;
  phase.elements_per_ris = model_->config().ris_elements();
  phase.angles = theta;
  const PhaseOutputs po = model_->phase_outputs(phase);
  const StateEval ev = model_->evaluate(po, activation_, power_);
  if (!ev.precoder_ok) return -std::numeric_limits<double>::infinity();
  return maximize_objective_ ? ev.objective(alpha_) : ev.sum_rate_bps;
}

Vec numerical_gradient(const FitnessFn& fitness, const Vec& theta, double eps) {
  if (eps <= 0.0) throw std::invalid_argument("numerical_gradient: eps must be > 0");
  Vec grad(theta.size());
  Vec probe = theta;
  for (Eigen::Index n = 0; n < theta.size(); ++n) {
    probe(n) = theta(n) + eps;
    const double hi = fitness(probe);
    probe(n) = theta(n) - eps;
    const double lo = fitness(probe);
    probe(n) = theta(n);
    grad(n) = (hi - lo) / (2.0 * eps);
  }
  return grad;
}

namespace {

// Eq.-style projected update: coefficient nudged tangentially in the complex
// plane, then renormalized via its argument.
Vec projected_step(const Vec& theta, const Vec& grad, double step) {
  Vec out(theta.size());
  for (Eigen::Index n = 0; n < theta.size(); ++n) {
    const cplx phi(std::cos(theta(n)), std::sin(theta(n)));
    const cplx moved = phi + step * cplx(0.0, 1.0) * phi * grad(n);
    out(n) = wrap_angle(std::arg(moved));
  }
  return out;
}

}  // namespace

RisOptResult gp_optimize(const FitnessFn& fitness, const Vec& theta_init,
                         const SolverParams& params, std::vector<double>* fitness_trace) {
  RisOptResult res;
  res.theta = theta_init;
  for (Eigen::Index n = 0; n < res.theta.size(); ++n) res.theta(n) = wrap_angle(res.theta(n));
  res.fitness = fitness(res.theta);
  ++res.evaluations;
  if (fitness_trace) fitness_trace->push_back(res.fitness);
  if (res.theta.size() == 0) return res;

  for (int it = 0; it < params.gp_max_iters; ++it) {
    const Vec grad = numerical_gradient(fitness, res.theta, params.fd_step);
    res.evaluations += 2 * static_cast<std::uint64_t>(res.theta.size());
    const double gnorm_inf = grad.cwiseAbs().maxCoeff();
    if (gnorm_inf == 0.0) break;
    const double gnorm2 = grad.squaredNorm();

    double step = params.armijo_init_step / gnorm_inf;
    const double min_step = params.armijo_min_step / gnorm_inf;
    bool improved = false;
    Vec cand;
    double f_cand = 0.0;
    while (step >= min_step) {
      cand = projected_step(res.theta, grad, step);
      f_cand = fitness(cand);
      ++res.evaluations;
      if (f_cand >= res.fitness + params.armijo_slope * step * gnorm2) {
        improved = true;
        break;
      }
      step *= params.armijo_shrink;
    }
    if (!improved) break;  // ascent safeguard: keep the current iterate

    const double prev = res.fitness;
    res.theta = cand;
    res.fitness = f_cand;
    res.iterations = it + 1;
    if (fitness_trace) fitness_trace->push_back(res.fitness);
    if (std::abs(res.fitness - prev) / std::max(std::abs(prev), 1e-300) < params.gp_tol) break;
  }
  return res;
}

double woa_control_param(int iter, int max_iters) {
  if (max_iters <= 1) return 0.0;
  return 2.0 * (1.0 - static_cast<double>(iter) / (max_iters - 1));
}

RisOptResult woa_optimize(const FitnessFn& fitness, const Vec& theta_init,
                          const SolverParams& params, Rng& rng,
                          std::vector<double>* best_trace) {
  const Eigen::Index dim = theta_init.size();
  const int pop = params.woa_population;
  RisOptResult res;
  res.theta = theta_init;
  for (Eigen::Index n = 0; n < res.theta.size(); ++n) res.theta(n) = wrap_angle(res.theta(n));
  if (dim == 0) {
    res.fitness = fitness(res.theta);
    ++res.evaluations;
    return res;
  }

  std::vector<Vec> whales(pop);
  whales[0] = res.theta;
  for (int i = 1; i < pop; ++i) {
    whales[i].resize(dim);
    for (Eigen::Index n = 0; n < dim; ++n) whales[i](n) = rng.uniform(0.0, 2.0 * kPi);
  }
  res.fitness = -std::numeric_limits<double>::infinity();
  for (int i = 0; i < pop; ++i) {
    const double f = fitness(whales[i]);
    ++res.evaluations;
    if (f > res.fitness) {
      res.fitness = f;
      res.theta = whales[i];
    }
  }
  if (best_trace) best_trace->push_back(res.fitness);

  for (int t = 0; t < params.woa_max_iters; ++t) {
    const double a = woa_control_param(t, params.woa_max_iters);
    for (int i = 0; i < pop; ++i) {
      Vec& w = whales[i];
      const double p = rng.uniform();
      if (p < 0.5) {
        for (Eigen::Index n = 0; n < dim; ++n) {
          const double ac = 2.0 * a * rng.uniform() - a;
          const double cc = 2.0 * rng.uniform();
          if (std::abs(ac) < 1.0) {
            const double d = std::abs(cc * res.theta(n) - w(n));
            w(n) = res.theta(n) - ac * d;
          } else {
            const Vec& ref = whales[rng.uniform_int(pop)];
            const double d = std::abs(cc * ref(n) - w(n));
            w(n) = ref(n) - ac * d;
          }
        }
      } else {
        const double l = rng.uniform(-1.0, 1.0);
        const double swirl = std::exp(params.woa_spiral_b * l) * std::cos(2.0 * kPi * l);
        for (Eigen::Index n = 0; n < dim; ++n)
          w(n) = std::abs(res.theta(n) - w(n)) * swirl + res.theta(n);
      }
      for (Eigen::Index n = 0; n < dim; ++n) w(n) = wrap_angle(w(n));
      const double f = fitness(w);
      ++res.evaluations;
      if (f > res.fitness) {
        res.fitness = f;
        res.theta = w;
      }
    }
    res.iterations = t + 1;
    if (best_trace) best_trace->push_back(res.fitness);
  }
  return res;
}

}  // namespace cfris
