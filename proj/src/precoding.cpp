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

#include "cfris/precoding.hpp"

#include <Eigen/SVD>
#include <stdexcept>

namespace cfris {

ApActivation ApActivation::from_active_indices(int m, const std::vector<int>& idx) {
  ApActivation act;
  act.delta.assign(m, 0);
  for (int i : idx) act.delta.at(i) = 1;
  return act;
}

int ApActivation::active_count() const {
  int n = 0;
  for (auto d : delta) n += d;
  return n;
}

std::vector<int> ApActivation::active_indices() const {
  std::vector<int> idx;
  idx.reserve(delta.size());
  for (int m = 0; m < static_cast<int>(delta.size()); ++m)
    if (delta[m]) idx.push_back(m);
  return idx;
}

std::optional<Precoder> zf_precoder(const CMat& g_hat, const ApActivation& activation) {
  const int k_ues = static_cast<int>(g_hat.cols());
  if (activation.num_aps() != g_hat.rows())
    throw std::invalid_argument("zf_precoder: activation/estimate dimension mismatch");
  Precoder pre;
  pre.active = activation.active_indices();
  const int ma = static_cast<int>(pre.active.size());
  if (ma < k_ues) return std::nullopt;

  CMat g_a(ma, k_ues);
  for (int i = 0; i < ma; ++i) g_a.row(i) = g_hat.row(pre.active[i]);

  const CMat gram = g_a.transpose() * g_a.conjugate();
  Eigen::JacobiSVD<CMat> svd(gram);
  const double smax = svd.singularValues()(0);
  const double smin = svd.singularValues()(k_ues - 1);
  pre.cond = smin > 0.0 ? smax / smin : std::numeric_limits<double>::infinity();
  if (!(pre.cond < kGramConditionLimit)) return std::nullopt;

  pre.v_active = g_a.conjugate() * gram.ldlt().solve(CMat::Identity(k_ues, k_ues));
  pre.c = pre.v_active.colwise().squaredNorm().real().transpose();
  return pre;
}

Vec heuristic_power(const Precoder& precoder, double p_max, double p_max_ue, bool full_sum) {
  const int k_ues = static_cast<int>(precoder.v_active.cols());
  const int ma = static_cast<int>(precoder.v_active.rows());
  const Mat eta = precoder.v_active.cwiseAbs2();  // eta(m, i) = |[v_i]_m|^2

  Vec p(k_ues);
  for (int k = 0; k < k_ues; ++k) {
    double worst = 0.0;
    for (int m = 0; m < ma; ++m) {
      const double tail = full_sum ? eta.row(m).sum() : eta.row(m).tail(k_ues - k).sum();
      worst = std::max(worst, tail);
    }
    p(k) = std::min(p_max / worst, p_max_ue);
  }
  // uniform down-scale until every active AP respects P_max
  double load = 0.0;
  for (int m = 0; m < ma; ++m) load = std::max(load, eta.row(m).dot(p.transpose()));
  if (load > p_max) p *= p_max / load;
  return p;
}

Mat error_interference(const Precoder& precoder, const std::vector<CMat>& err_cov) {
  const int k_ues = static_cast<int>(precoder.v_active.cols());
  const int ma = static_cast<int>(precoder.v_active.rows());
  Mat gamma(k_ues, k_ues);
  CMat c_a(ma, ma);
  for (int k = 0; k < k_ues; ++k) {
    // interference power of a transposed-channel product uses E[conj(e) e^T],
    // the conjugate of the stored covariance
    for (int i = 0; i < ma; ++i)
      for (int j = 0; j < ma; ++j)
        c_a(i, j) = std::conj(err_cov[k](precoder.active[i], precoder.active[j]));
    for (int i = 0; i < k_ues; ++i) {
      const auto v = precoder.v_active.col(i);
      gamma(k, i) = std::max(0.0, (v.adjoint() * c_a * v).value().real());
    }
  }
  return gamma;
}

RateReport rate_report(const Vec& power, const Mat& gamma, double noise_var, double bandwidth_hz,
                       const Precoder& precoder, int num_aps, double prelog) {
  const int k_ues = static_cast<int>(power.size());
  RateReport rep;
  rep.sinr.resize(k_ues);
  rep.rate_se.resize(k_ues);
  for (int k = 0; k < k_ues; ++k) {
    const double denom = gamma.row(k).dot(power.transpose()) + noise_var;
    rep.sinr(k) = power(k) / denom;
    rep.rate_se(k) = prelog * std::log2(1.0 + rep.sinr(k));
  }
  rep.sum_rate_bps = bandwidth_hz * rep.rate_se.sum();
  rep.per_ap_tx_w = Vec::Zero(num_aps);
  const Mat eta = precoder.v_active.cwiseAbs2();
  for (size_t i = 0; i < precoder.active.size(); ++i)
    rep.per_ap_tx_w(precoder.active[i]) = eta.row(static_cast<int>(i)).dot(power.transpose());
  rep.c = precoder.c;
  return rep;
}

}  // namespace cfris
