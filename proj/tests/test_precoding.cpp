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

#include "cfris/precoding.hpp"
#include "cfris/rng.hpp"

using namespace cfris;

namespace {

CMat random_matrix(int rows, int cols, Rng& rng) {
  CMat g(rows, cols);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) g(i, j) = rng.cnormal();
  return g;
}

CMat random_psd(int n, Rng& rng, double scale = 1.0) {
  const CMat a = random_matrix(n, n, rng);
  return scale * (a * a.adjoint()) / n;
}

CMat expand_precoder(const Precoder& pre, int m) {
  CMat v = CMat::Zero(m, pre.v_active.cols());
  for (size_t i = 0; i < pre.active.size(); ++i) v.row(pre.active[i]) = pre.v_active.row(i);
  return v;
}

}  // namespace

TEST_CASE("zf_precoder: scalar case inverts the channel") {
  CMat g(1, 1);
  g(0, 0) = 2.0;
  const auto pre = zf_precoder(g, ApActivation::all_active(1));
  REQUIRE(pre.has_value());
  CHECK(std::abs(pre->v_active(0, 0) - cplx(0.5, 0)) < 1e-15);
  CHECK(std::abs(g(0, 0) * pre->v_active(0, 0) - cplx(1, 0)) < 1e-15);
}

TEST_CASE("zf_precoder: G^T Delta V = I on the active set") {
  Rng rng(50);
  const CMat g = random_matrix(8, 4, rng);
  ApActivation act = ApActivation::all_active(8);
  act.delta[2] = 0;
  act.delta[5] = 0;
  const auto pre = zf_precoder(g, act);
  REQUIRE(pre.has_value());
  const CMat v = expand_precoder(*pre, 8);
  CMat delta = CMat::Zero(8, 8);
  for (int m = 0; m < 8; ++m) delta(m, m) = act.delta[m];
  CHECK((g.transpose() * delta * v - CMat::Identity(4, 4)).norm() < 1e-9);
}

TEST_CASE("zf_precoder: dropping an AP with a zero row leaves the rest unchanged") {
  Rng rng(51);
  CMat g = random_matrix(6, 3, rng);
  g.row(4).setZero();
  const auto with = zf_precoder(g, ApActivation::all_active(6));
  ApActivation reduced = ApActivation::all_active(6);
  reduced.delta[4] = 0;
  const auto without = zf_precoder(g, reduced);
  REQUIRE(with.has_value());
  REQUIRE(without.has_value());
  const CMat va = expand_precoder(*with, 6);
  const CMat vb = expand_precoder(*without, 6);
  for (int m = 0; m < 6; ++m) {
    if (m == 4) continue;
    CHECK((va.row(m) - vb.row(m)).norm() <= 1e-9 * std::max(1.0, vb.row(m).norm()));
  }
}

TEST_CASE("zf_precoder: near-singular Gram signals an infeasible activation") {
  Rng rng(52);
  CMat g = random_matrix(5, 3, rng);
  g.col(2) = g.col(1);  // linearly dependent estimates
  CHECK_FALSE(zf_precoder(g, ApActivation::all_active(5)).has_value());
  ApActivation thin = ApActivation::all_active(5);
  thin.delta[0] = thin.delta[1] = thin.delta[2] = 0;  // |M_A| < K
  const CMat g2 = random_matrix(5, 3, rng);
  CHECK_FALSE(zf_precoder(g2, thin).has_value());
}

TEST_CASE("heuristic_power: scalar case allocates P_max") {
  CMat g(1, 1);
  g(0, 0) = 1.0;
  const auto pre = zf_precoder(g, ApActivation::all_active(1));
  REQUIRE(pre.has_value());
  const Vec p = heuristic_power(*pre, 0.2, 10.0);
  CHECK(p(0) == doctest::Approx(0.2).epsilon(1e-12));
}

TEST_CASE("heuristic_power: per-AP powers respect P_max (the targeted property)") {
  Rng rng(53);
  for (int trial = 0; trial < 20; ++trial) {
    const CMat g = 1e-5 * random_matrix(6, 3, rng);
    const auto pre = zf_precoder(g, ApActivation::all_active(6));
    if (!pre) continue;
    for (bool full_sum : {false, true}) {
      const Vec p = heuristic_power(*pre, 0.2, 0.2, full_sum);
      const Mat eta = pre->v_active.cwiseAbs2();
      for (int m = 0; m < 6; ++m) CHECK(eta.row(m).dot(p) <= 0.2 * (1 + 1e-12));
      for (int k = 0; k < 3; ++k) {
        CHECK(p(k) > 0.0);
        CHECK(p(k) <= 0.2 * (1 + 1e-12));
      }
    }
  }
}

TEST_CASE("heuristic_power: scaling the estimate leaves per-AP powers invariant") {
  Rng rng(54);
  const CMat g = random_matrix(5, 2, rng);
  const auto pre1 = zf_precoder(g, ApActivation::all_active(5));
  const auto pre2 = zf_precoder(CMat(2.0 * g), ApActivation::all_active(5));
  REQUIRE(pre1.has_value());
  REQUIRE(pre2.has_value());
  const double cap_ue = 1e12;  // keep the per-UE clip inactive
  const Vec p1 = heuristic_power(*pre1, 0.2, cap_ue);
  const Vec p2 = heuristic_power(*pre2, 0.2, cap_ue);
  CHECK((p2 - 4.0 * p1).norm() <= 1e-9 * p2.norm());
  const Mat eta1 = pre1->v_active.cwiseAbs2();
  const Mat eta2 = pre2->v_active.cwiseAbs2();
  for (int m = 0; m < 5; ++m)
    CHECK(eta1.row(m).dot(p1) == doctest::Approx(eta2.row(m).dot(p2)).epsilon(1e-9));
}

TEST_CASE("error_interference: perfect CSI gives zero interference") {
  Rng rng(55);
  const CMat g = random_matrix(4, 2, rng);
  const auto pre = zf_precoder(g, ApActivation::all_active(4));
  REQUIRE(pre.has_value());
  const std::vector<CMat> zero_cov(2, CMat::Zero(4, 4));
  const Mat gamma = error_interference(*pre, zero_cov);
  CHECK(gamma.norm() == 0.0);
}

TEST_CASE("error_interference: entries are real nonnegative quadratic forms") {
  Rng rng(56);
  const CMat g = random_matrix(5, 3, rng);
  const auto pre = zf_precoder(g, ApActivation::all_active(5));
  REQUIRE(pre.has_value());
  std::vector<CMat> cov;
  for (int k = 0; k < 3; ++k) cov.push_back(random_psd(5, rng));
  const Mat gamma = error_interference(*pre, cov);
  for (int k = 0; k < 3; ++k)
    for (int i = 0; i < 3; ++i) CHECK(gamma(k, i) >= 0.0);
}

TEST_CASE("error_interference: Monte Carlo interference power matches sum_i p_i gamma_ki") {
  Rng rng(57);
  const int m = 4, k_ues = 2;
  const CMat g = random_matrix(m, k_ues, rng);
  ApActivation act = ApActivation::all_active(m);
  act.delta[1] = 0;
  const auto pre = zf_precoder(g, act);
  REQUIRE(pre.has_value());
  std::vector<CMat> cov;
  for (int k = 0; k < k_ues; ++k) cov.push_back(random_psd(m, rng, 0.3));
  const Mat gamma = error_interference(*pre, cov);
  Vec p(k_ues);
  p << 0.7, 1.3;

  const CMat v = expand_precoder(*pre, m);
  CMat delta = CMat::Zero(m, m);
  for (int i = 0; i < m; ++i) delta(i, i) = act.delta[i];
  const CMat w = delta * v * p.cwiseSqrt().asDiagonal();

  for (int k = 0; k < k_ues; ++k) {
    Eigen::SelfAdjointEigenSolver<CMat> eig(cov[k]);
    const CMat factor =
        eig.eigenvectors() * eig.eigenvalues().cwiseMax(0.0).cwiseSqrt().asDiagonal();
    const int trials = 100000;
    double acc = 0.0;
    for (int t = 0; t < trials; ++t) {
      const CVec err = factor * rng.cnormal_vector(m);  // CN(0, C_k)
      // E_s |err^T W s|^2 = ||err^T W||^2 for unit uncorrelated symbols
      acc += (err.transpose() * w).squaredNorm();
    }
    acc /= trials;
    const double want = gamma.row(k).dot(p);
    CHECK(acc == doctest::Approx(want).epsilon(0.03));
  }
}

TEST_CASE("rate_report: unit case and linearity in the noise-limited regime") {
  Rng rng(58);
  const CMat g = random_matrix(3, 2, rng);
  const auto pre = zf_precoder(g, ApActivation::all_active(3));
  REQUIRE(pre.has_value());
  const Mat gamma = Mat::Zero(2, 2);
  Vec p = Vec::Ones(2);
  const RateReport rep = rate_report(p, gamma, 1.0, 1.0, *pre, 3);
  CHECK(rep.sinr(0) == doctest::Approx(1.0));
  CHECK(rep.rate_se(0) == doctest::Approx(1.0));
  const RateReport rep2 = rate_report(Vec(2 * p), gamma, 1.0, 1.0, *pre, 3);
  CHECK(rep2.sinr(0) == doctest::Approx(2.0 * rep.sinr(0)));
}

TEST_CASE("rate_report: per-AP transmit powers sum to sum_k c_k p_k") {
  Rng rng(59);
  const CMat g = random_matrix(6, 3, rng);
  ApActivation act = ApActivation::all_active(6);
  act.delta[3] = 0;
  const auto pre = zf_precoder(g, act);
  REQUIRE(pre.has_value());
  Vec p(3);
  p << 0.3, 1.1, 2.2;
  const RateReport rep = rate_report(p, Mat::Zero(3, 3), 1e-3, 2e7, *pre, 6);
  CHECK(rep.per_ap_tx_w.sum() == doctest::Approx(rep.c.dot(p)).epsilon(1e-12));
  CHECK(rep.per_ap_tx_w(3) == 0.0);
}

TEST_CASE("received signal has no cross-user term under the estimated channel") {
  Rng rng(60);
  const int m = 5, k_ues = 3;
  const CMat g = random_matrix(m, k_ues, rng);
  const auto pre = zf_precoder(g, ApActivation::all_active(m));
  REQUIRE(pre.has_value());
  const CMat v = expand_precoder(*pre, m);
  Vec p(k_ues);
  p << 1.0, 2.0, 0.5;
  const CMat coupling = g.transpose() * v * p.cwiseSqrt().asDiagonal();
  for (int k = 0; k < k_ues; ++k)
    for (int i = 0; i < k_ues; ++i)
      if (i != k)
        CHECK(std::abs(coupling(k, i)) < 1e-9 * std::abs(coupling(k, k)));
}

TEST_CASE("end-to-end simulated SINR matches the closed form within 3%") {
  Rng rng(61);
  const int m = 4, k_ues = 2;
  const CMat g_hat = random_matrix(m, k_ues, rng);
  const auto pre = zf_precoder(g_hat, ApActivation::all_active(m));
  REQUIRE(pre.has_value());
  std::vector<CMat> cov;
  for (int k = 0; k < k_ues; ++k) cov.push_back(random_psd(m, rng, 0.2));
  const Mat gamma = error_interference(*pre, cov);
  Vec p(k_ues);
  p << 1.5, 0.9;
  const double noise_var = 0.05;
  const RateReport rep = rate_report(p, gamma, noise_var, 1.0, *pre, m);

  const CMat v = expand_precoder(*pre, m);
  const CMat w = v * p.cwiseSqrt().asDiagonal();
  std::vector<CMat> factors;
  for (int k = 0; k < k_ues; ++k) {
    Eigen::SelfAdjointEigenSolver<CMat> eig(cov[k]);
    factors.push_back(eig.eigenvectors() *
                      eig.eigenvalues().cwiseMax(0.0).cwiseSqrt().asDiagonal());
  }
  const int trials = 100000;
  for (int k = 0; k < k_ues; ++k) {
    double denom_acc = 0.0;
    for (int t = 0; t < trials; ++t) {
      const CVec err = factors[k] * rng.cnormal_vector(m);
      CVec sym(k_ues);
      for (int i = 0; i < k_ues; ++i) sym(i) = rng.cnormal();
      const cplx interference = (err.transpose() * w * sym)(0);
      const cplx noise = std::sqrt(noise_var) * rng.cnormal();
      denom_acc += std::norm(interference + noise);
    }
    denom_acc /= trials;
    const double sinr_mc = p(k) / denom_acc;
    CHECK(sinr_mc == doctest::Approx(rep.sinr(k)).epsilon(0.03));
  }
}

TEST_CASE("gamma is invariant under a common phase rotation of the estimate columns") {
  Rng rng(62);
  const CMat g = random_matrix(5, 3, rng);
  const auto pre1 = zf_precoder(g, ApActivation::all_active(5));
  CMat g2 = g;
  for (int k = 0; k < 3; ++k) g2.col(k) *= std::polar(1.0, rng.uniform(0.0, 2 * kPi));
  const auto pre2 = zf_precoder(g2, ApActivation::all_active(5));
  REQUIRE(pre1.has_value());
  REQUIRE(pre2.has_value());
  std::vector<CMat> cov;
  for (int k = 0; k < 3; ++k) cov.push_back(random_psd(5, rng));
  const Mat gamma1 = error_interference(*pre1, cov);
  const Mat gamma2 = error_interference(*pre2, cov);
  CHECK((gamma1 - gamma2).norm() <= 1e-9 * gamma1.norm());
}
