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

#include <functional>
#include <vector>

#include "cfris/system.hpp"

namespace cfris {

using FitnessFn = std::function<double(const Vec&)>;

/// Sum-rate fitness over phase angles at fixed activation and power. Every
/// call reruns estimation, precoding, and the SINR under the model's pinned
/// pilot noise, so repeated calls with the same angles agree bit-for-bit.
/// A near-singular precoder yields -inf (candidate rejected). When
/// maximize_objective is set the fitness is f - alpha*g instead of f (used
/// when 1 - alpha*P_dyn <= 0 invalidates the sum-rate equivalence).
class RisFitness {
 public:
  RisFitness(const SystemModel& model, ApActivation activation, Vec power, double alpha = 0.0,
             bool maximize_objective = false)
      : model_(&model),
        activation_(std::move(activation)),
        power_(std::move(power)),
        alpha_(alpha),
        maximize_objective_(maximize_objective) {}

  double operator()(const Vec& theta) const;
  std::uint64_t evaluations() const { return evals_; }
  int dimension() const {
    return model_->config().num_ris * model_->config().ris_elements();
  }

 private:
  const SystemModel* model_;
  ApActivation activation_;
  Vec power_;
  double alpha_;
  bool maximize_objective_;
  mutable std::uint64_t evals_ = 0;
};

/// Central difference per element: (f(x + eps e_n) - f(x - eps e_n))/(2 eps).
/// Costs exactly 2*dim fitness evaluations.
Vec numerical_gradient(const FitnessFn& fitness, const Vec& theta, double eps);

struct RisOptResult {
  Vec theta;
  double fitness = -std::numeric_limits<double>::infinity();
  int iterations = 0;
  std::uint64_t evaluations = 0;  // fitness calls made by the optimizer itself
};

/// Projected gradient ascent on the torus: the complex coefficient moves
/// along e^{j theta} + step * j e^{j theta} grad and is renormalized through
/// its argument. Armijo backtracking (step pre-scaled by 1/||grad||_inf)
/// guarantees a non-decreasing fitness sequence; returns the current point
/// when no improving step remains.
RisOptResult gp_optimize(const FitnessFn& fitness, const Vec& theta_init,
                         const SolverParams& params, std::vector<double>* fitness_trace = nullptr);

/// Control parameter a(t), linearly decreased from 2 to 0 across iterations.
double woa_control_param(int iter, int max_iters);

/// Whale optimization over the angle vector: encircling / spiral / random
/// search with p = 0.5 branch selection, per-dimension coefficient vectors,
/// angles wrapped modulo 2*pi. theta_init seeds whale 0; the best-so-far
/// solution is never lost.
RisOptResult woa_optimize(const FitnessFn& fitness, const Vec& theta_init,
                          const SolverParams& params, Rng& rng,
                          std::vector<double>* best_trace = nullptr);

}  // namespace cfris
