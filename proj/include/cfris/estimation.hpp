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

#include "cfris/channel.hpp"

namespace cfris {

/// Per-UE output of the direct MMSE estimator for the aggregated channel.
struct ChannelEstimate {
  CVec g_hat;   // M
  CMat q;       // M x M aggregate covariance
  CMat psi;     // (tau_t p_u Q + sigma_u^2 I)^{-1}
  CMat c;       // M x M error covariance, Hermitian PSD
};

struct PilotParams {
  double tau_t = 0;     // training symbols
  double power = 0;     // p_u
  double noise_var = 0; // sigma_u^2
};

/// Aggregate covariance of the composite channel of UE k:
/// sum_l H_ar,l Phi_l Gamma_ru,lk Phi_l^H H_ar,l^H + diag(beta_au/(kappa_au+1)).
CMat aggregate_covariance(const ChannelRealization& real, const RisPhase& phase, int ue);

/// All K aggregate covariances. Gamma_ru,lk = scale_lk * R shares the element
/// correlation across links, so the surface term (H Phi) R (H Phi)^H is built
/// once per RIS and combined per UE.
std::vector<CMat> aggregate_covariances(const ChannelRealization& real, const RisPhase& phase);

/// MMSE estimate from a fixed pilot-noise realization (deterministic given
/// the noise vector). y = sqrt(tau_t p_u) g + n with n ~ CN(0, sigma_u^2 I).
ChannelEstimate mmse_estimate_with_noise(const CVec& g_true, const CVec& g_mean, const CMat& q,
                                         const PilotParams& pilot, const CVec& noise);

/// Draws the pilot noise from rng, then estimates. The returned C_k has its
/// eigenvalues clipped at zero.
ChannelEstimate mmse_estimate(const CVec& g_true, const CVec& g_mean, const CMat& q,
                              const PilotParams& pilot, Rng& rng);

/// Clips negative eigenvalues of a Hermitian matrix to zero.
CMat clip_psd(const CMat& h, double tol = 1e-9);

}  // namespace cfris
