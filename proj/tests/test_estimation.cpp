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

#include <doctest.h>

#include <Eigen/Eigenvalues>

#include "cfris/estimation.hpp"
#include "test_util.hpp"

using namespace cfris;

namespace {

struct Instance {
  ScenarioConfig cfg;
  ChannelRealization real;
  RisPhase phase;
};

Instance make_instance(int m, int k, int l, int n_side, std::uint64_t seed) {
  Instance inst;
  inst.cfg = test::small_config(m, k, l, n_side);
  Rng rng(seed);
  const Topology topo = generate_topology(inst.cfg, rng);
  const LinkStatsSet stats = sample_all_link_stats(inst.cfg, topo, rng);
  inst.real = sample_channels(inst.cfg, topo, stats, rng);
  inst.phase = RisPhase::random(l, n_side * n_side, rng);
  return inst;
}

// sample g ~ CN(g_mean, Q) through an eigenfactor of Q
CVec draw_gaussian(const CVec& mean, const CMat& cov, Rng& rng) {
  Eigen::SelfAdjointEigenSolver<CMat> eig(cov);
  const CMat factor =
      eig.eigenvectors() * eig.eigenvalues().cwiseMax(0.0).cwiseSqrt().asDiagonal();
  return mean + factor * rng.cnormal_vector(mean.size());
}

}  // namespace

TEST_CASE("aggregate_covariance: NLoS-variance-only case is diagonal") {
  Instance inst = make_instance(4, 2, 1, 2, 31);
  inst.real.gamma_ru_scale.setZero();
  inst.real.kappa_au.setZero();
  const CMat q = aggregate_covariance(inst.real, inst.phase, 0);
  for (int i = 0; i < 4; ++i) {
    CHECK(q(i, i).real() == doctest::Approx(inst.real.beta_au(i, 0)).epsilon(1e-12));
    for (int j = 0; j < 4; ++j)
      if (i != j) CHECK(std::abs(q(i, j)) < 1e-15);
  }
}

TEST_CASE("aggregate_covariance: Hermitian and equal to the scalar summation oracle") {
  Instance inst = make_instance(5, 3, 2, 2, 32);
  for (int k = 0; k < 3; ++k) {
    const CMat q = aggregate_covariance(inst.real, inst.phase, k);
    CHECK((q - q.adjoint()).norm() < 1e-12 * std::max(1.0, q.norm()));

    // element-by-element recomputation of sum_l H Phi Gamma Phi^H H^H + diag
    const int m_aps = 5, n_el = 4;
    CMat want = CMat::Zero(m_aps, m_aps);
    for (int l = 0; l < 2; ++l) {
      const CVec phi = inst.phase.coefficients(l);
      const Mat gamma = inst.real.gamma_ru(l, k);
      for (int a = 0; a < m_aps; ++a)
        for (int b = 0; b < m_aps; ++b)
          for (int u = 0; u < n_el; ++u)
            for (int v = 0; v < n_el; ++v)
              want(a, b) += inst.real.h_ar[l](a, u) * phi(u) * gamma(u, v) *
                            std::conj(phi(v)) * std::conj(inst.real.h_ar[l](b, v));
    }
    for (int m = 0; m < m_aps; ++m)
      want(m, m) += inst.real.beta_au(m, k) / (inst.real.kappa_au(m, k) + 1.0);
    CHECK((q - want).norm() <= 1e-12 * std::max(1.0, want.norm()));
  }
}

TEST_CASE("aggregate_covariances batch output equals the per-UE operation") {
  Instance inst = make_instance(6, 3, 2, 3, 33);
  const auto all = aggregate_covariances(inst.real, inst.phase);
  for (int k = 0; k < 3; ++k) {
    const CMat single = aggregate_covariance(inst.real, inst.phase, k);
    CHECK((all[k] - single).norm() <= 1e-12 * std::max(1.0, single.norm()));
  }
}

TEST_CASE("mmse_estimate: noiseless pilots recover the channel") {
  Instance inst = make_instance(4, 2, 1, 2, 34);
  const CMat q = aggregate_covariance(inst.real, inst.phase, 0);
  const CMat g_mean = effective_channel_mean(inst.real, inst.phase);
  const CMat g = effective_channel(inst.real, inst.phase);
  PilotParams pilot{20.0, 0.1, 1e-30};
  Rng rng(35);
  const ChannelEstimate est = mmse_estimate(g.col(0), g_mean.col(0), q, pilot, rng);
  CHECK((est.g_hat - g.col(0)).norm() <= 1e-6 * g.col(0).norm());
  CHECK(est.c.norm() <= 1e-15 * q.norm());
}

TEST_CASE("mmse_estimate: uninformative pilots return the prior") {
  Instance inst = make_instance(4, 2, 1, 2, 36);
  const CMat q = aggregate_covariance(inst.real, inst.phase, 1);
  const CMat g_mean = effective_channel_mean(inst.real, inst.phase);
  const CMat g = effective_channel(inst.real, inst.phase);
  PilotParams pilot{1e-30, 1e-30, 1e-9};
  Rng rng(37);
  const ChannelEstimate est = mmse_estimate(g.col(1), g_mean.col(1), q, pilot, rng);
  CHECK((est.g_hat - g_mean.col(1)).norm() <= 1e-9 * std::max(1.0, g_mean.col(1).norm()));
  CHECK((est.c - q).norm() <= 1e-9 * q.norm());
}

TEST_CASE("mmse_estimate: rejects nonpositive pilot noise variance") {
  Instance inst = make_instance(2, 1, 0, 1, 38);
  const CMat q = aggregate_covariance(inst.real, inst.phase, 0);
  PilotParams pilot{20.0, 0.1, 0.0};
  Rng rng(39);
  CHECK_THROWS_AS(mmse_estimate(inst.real.h_au.col(0), inst.real.h_au_mean.col(0), q, pilot, rng),
                  std::invalid_argument);
}

TEST_CASE("mmse_estimate: Monte Carlo error covariance matches C_k within 5%") {
  Instance inst = make_instance(4, 1, 1, 2, 40);
  const CMat q = aggregate_covariance(inst.real, inst.phase, 0);
  const CVec mean = effective_channel_mean(inst.real, inst.phase).col(0);
  // pilot SNR of order one so C is a nontrivial fraction of Q
  const double sigma2 = 2.0 * q.trace().real() / q.rows();
  PilotParams pilot{20.0, 0.1, 20.0 * 0.1 * sigma2};
  Rng rng(41);

  CMat c_ref;
  {
    const ChannelEstimate est = mmse_estimate(mean, mean, q, pilot, rng);
    c_ref = est.c;
  }
  const int trials = 10000;
  CMat err_acc = CMat::Zero(4, 4);
  CMat cross_acc = CMat::Zero(4, 4);
  CMat hat_acc = CMat::Zero(4, 4);
  for (int i = 0; i < trials; ++i) {
    const CVec g = draw_gaussian(mean, q, rng);
    const ChannelEstimate est = mmse_estimate(g, mean, q, pilot, rng);
    const CVec err = g - est.g_hat;
    err_acc += err * err.adjoint();
    cross_acc += (est.g_hat - mean) * err.adjoint();
    hat_acc += (est.g_hat - mean) * (est.g_hat - mean).adjoint();
  }
  err_acc /= static_cast<double>(trials);
  cross_acc /= static_cast<double>(trials);
  hat_acc /= static_cast<double>(trials);

  CHECK((err_acc - c_ref).norm() <= 0.05 * c_ref.norm());
  // MMSE orthogonality: estimate fluctuation uncorrelated with the error
  CHECK(cross_acc.norm() <= 0.05 * std::sqrt(hat_acc.norm() * c_ref.norm() + 1e-300));
  // estimate covariance matches tau_t p_u Q Psi Q
  const ChannelEstimate ref = mmse_estimate(mean, mean, q, pilot, rng);
  const CMat hat_th = pilot.tau_t * pilot.power * q * ref.psi * q;
  CHECK((hat_acc - hat_th).norm() <= 0.05 * hat_th.norm());
}

TEST_CASE("mmse_estimate: returned error covariance is PSD after clipping") {
  Instance inst = make_instance(5, 2, 1, 2, 42);
  const CMat q = aggregate_covariance(inst.real, inst.phase, 0);
  const CVec mean = effective_channel_mean(inst.real, inst.phase).col(0);
  const CVec g = effective_channel(inst.real, inst.phase).col(0);
  PilotParams pilot{20.0, 0.1, 1e-12};
  Rng rng(43);
  const ChannelEstimate est = mmse_estimate(g, mean, q, pilot, rng);
  Eigen::SelfAdjointEigenSolver<CMat> eig(est.c);
  CHECK(eig.eigenvalues().minCoeff() >= -1e-9 * std::max(1.0, eig.eigenvalues().maxCoeff()));
}

TEST_CASE("clip_psd: clips slightly negative eigenvalues and rejects indefinite input") {
  CMat h = CMat::Identity(3, 3);
  h(0, 0) = -1e-12;
  const CMat clipped = clip_psd(h, 1e-9);
  Eigen::SelfAdjointEigenSolver<CMat> eig(clipped);
  CHECK(eig.eigenvalues().minCoeff() >= 0.0);
  CMat bad = CMat::Identity(2, 2);
  bad(1, 1) = -1.0;
  CHECK_THROWS_AS(clip_psd(bad, 1e-9), std::invalid_argument);
}
