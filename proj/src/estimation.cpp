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

#include "cfris/estimation.hpp"

#include <Eigen/Eigenvalues>
#include <stdexcept>

namespace cfris {

CMat aggregate_covariance(const ChannelRealization& real, const RisPhase& phase, int ue) {
  const int m_aps = real.num_aps;
  CMat q = CMat::Zero(m_aps, m_aps);
  for (int l = 0; l < real.num_ris; ++l) {
    const double scale = real.gamma_ru_scale(l, ue);
    if (scale == 0.0) continue;
    const CVec phi = phase.coefficients(l);
    // H Phi Gamma Phi^H H^H with Phi = diag(phi): Gamma .* (phi phi^H) inside
    const CMat inner = (scale * real.corr).cast<cplx>().cwiseProduct(phi * phi.adjoint());
    q.noalias() += real.h_ar[l] * inner * real.h_ar[l].adjoint();
  }
  for (int m = 0; m < m_aps; ++m)
    q(m, m) += real.beta_au(m, ue) / (real.kappa_au(m, ue) + 1.0);
  return 0.5 * (q + q.adjoint().eval());
}

std::vector<CMat> aggregate_covariances(const ChannelRealization& real, const RisPhase& phase) {
  const int m_aps = real.num_aps;
  std::vector<CMat> surface(real.num_ris);
  for (int l = 0; l < real.num_ris; ++l) {
    const CVec phi = phase.coefficients(l);
    CMat t = real.h_ar[l];
    for (int n = 0; n < real.ris_elements; ++n) t.col(n) *= phi(n);
    const CMat tr = t * real.corr;
    surface[l].noalias() = tr * t.adjoint();
  }
  std::vector<CMat> q(real.num_ues);
  for (int k = 0; k < real.num_ues; ++k) {
    q[k] = CMat::Zero(m_aps, m_aps);
    for (int l = 0; l < real.num_ris; ++l) q[k] += real.gamma_ru_scale(l, k) * surface[l];
    for (int m = 0; m < m_aps; ++m) q[k](m, m) += real.beta_au(m, k) / (real.kappa_au(m, k) + 1.0);
    q[k] = 0.5 * (q[k] + q[k].adjoint().eval());
  }
  return q;
}

ChannelEstimate mmse_estimate_with_noise(const CVec& g_true, const CVec& g_mean, const CMat& q,
                                         const PilotParams& pilot, const CVec& noise) {
  if (pilot.noise_var <= 0.0)
    throw std::invalid_argument("mmse_estimate: pilot noise variance must be > 0");
  if (pilot.tau_t * pilot.power < 0.0)
    throw std::invalid_argument("mmse_estimate: tau_t * p_u must be >= 0");
  const Eigen::Index m = g_true.size();
  const double tp = pilot.tau_t * pilot.power;
  const double amp = std::sqrt(tp);

  ChannelEstimate est;
  est.q = q;
  est.psi = (tp * q + pilot.noise_var * CMat::Identity(m, m)).ldlt().solve(CMat::Identity(m, m));
  const CVec y = amp * g_true + noise;
  est.g_hat = g_mean + amp * q * est.psi * (y - amp * g_mean);
  // C = Q - tp Q Psi Q = sigma_u^2 Q Psi, symmetrized
  CMat c = pilot.noise_var * q * est.psi;
  est.c = 0.5 * (c + c.adjoint().eval());
  return est;
}

ChannelEstimate mmse_estimate(const CVec& g_true, const CVec& g_mean, const CMat& q,
                              const PilotParams& pilot, Rng& rng) {
  const CVec noise = std::sqrt(pilot.noise_var) * rng.cnormal_vector(g_true.size());
  ChannelEstimate est = mmse_estimate_with_noise(g_true, g_mean, q, pilot, noise);
  est.c = clip_psd(est.c);
  return est;
}

CMat clip_psd(const CMat& h, double tol) {
  Eigen::SelfAdjointEigenSolver<CMat> eig(0.5 * (h + h.adjoint().eval()));
  if (eig.eigenvalues().minCoeff() >= 0.0) return eig.eigenvectors() *
      eig.eigenvalues().asDiagonal() * eig.eigenvectors().adjoint();
  if (eig.eigenvalues().minCoeff() < -tol * std::max(1.0, eig.eigenvalues().maxCoeff()))
    throw std::invalid_argument("clip_psd: matrix is far from PSD");
  const Vec vals = eig.eigenvalues().cwiseMax(0.0);
  return eig.eigenvectors() * vals.asDiagonal() * eig.eigenvectors().adjoint();
}

}  // namespace cfris
