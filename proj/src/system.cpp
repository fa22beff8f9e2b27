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

#include "cfris/system.hpp"

namespace cfris {

SystemModel::SystemModel(ScenarioConfig cfg, Topology topo, LinkStatsSet stats,
                         ChannelRealization real, CMat pilot_noise)
    : cfg_(std::move(cfg)),
      topo_(std::move(topo)),
      stats_(std::move(stats)),
      real_(std::move(real)),
      pilot_noise_(std::move(pilot_noise)),
      noise_var_(cfg_.noise_power_w()) {}

SystemModel SystemModel::draw(const ScenarioConfig& cfg, Rng& rng) {
  cfg.validate();
  Topology topo = generate_topology(cfg, rng);
  LinkStatsSet stats = sample_all_link_stats(cfg, topo, rng);
  ChannelRealization real = sample_channels(cfg, topo, stats, rng);
  CMat noise(cfg.num_aps, cfg.num_ues);
  const double sigma = std::sqrt(cfg.noise_power_w());
  for (int k = 0; k < cfg.num_ues; ++k)
    for (int m = 0; m < cfg.num_aps; ++m) noise(m, k) = sigma * rng.cnormal();
  return SystemModel(cfg, std::move(topo), std::move(stats), std::move(real), std::move(noise));
}

SystemModel SystemModel::without_ris() const {
  ScenarioConfig cfg = cfg_;
  cfg.num_ris = 0;
  Topology topo = topo_;
  topo.ris_positions.clear();
  topo.ris_boresight.clear();
  topo.d_ap_ris.resize(cfg.num_aps, 0);
  topo.d_ris_ue.resize(0, cfg.num_ues);
  LinkStatsSet stats = stats_;
  for (auto& row : stats.ap_ris) row.clear();
  stats.ris_ue.clear();
  ChannelRealization real = real_;
  real.num_ris = 0;
  real.ris_elements = 0;
  real.h_ar.clear();
  real.h_ru.clear();
  real.h_ru_mean.clear();
  real.gamma_ru_scale.resize(0, cfg.num_ues);
  real.corr.resize(0, 0);
  return SystemModel(cfg, std::move(topo), std::move(stats), std::move(real), pilot_noise_);
}

SystemModel SystemModel::with_solver(const SolverParams& solver) const {
  ScenarioConfig cfg = cfg_;
  cfg.solver = solver;
  return SystemModel(cfg, topo_, stats_, real_, pilot_noise_);
}

PhaseOutputs SystemModel::phase_outputs(const RisPhase& phase) const {
  PhaseOutputs po;
  po.g_true = effective_channel(real_, phase);
  const CMat g_mean = effective_channel_mean(real_, phase);
  const PilotParams pilot{static_cast<double>(cfg_.training_symbols), cfg_.pilot_power_w,
                          noise_var_};
  po.g_hat.resize(cfg_.num_aps, cfg_.num_ues);
  po.err_cov.resize(cfg_.num_ues);
  const std::vector<CMat> q = aggregate_covariances(real_, phase);
  for (int k = 0; k < cfg_.num_ues; ++k) {
    ChannelEstimate est = mmse_estimate_with_noise(po.g_true.col(k), g_mean.col(k), q[k], pilot,
                                                   pilot_noise_.col(k));
    po.g_hat.col(k) = est.g_hat;
    po.err_cov[k] = std::move(est.c);
  }
  return po;
}

StateEval SystemModel::evaluate(const PhaseOutputs& po, const ApActivation& activation,
                                const Vec& power) const {
  StateEval ev;
  auto pre = zf_precoder(po.g_hat, activation);
  if (!pre) return ev;
  ev.precoder_ok = true;
  ev.precoder = std::move(*pre);
  ev.gamma = error_interference(ev.precoder, po.err_cov);
  ev.rates = rate_report(power, ev.gamma, noise_var_, cfg_.bandwidth_hz, ev.precoder,
                         cfg_.num_aps, cfg_.prelog_factor());
  ev.sum_rate_bps = ev.rates.sum_rate_bps;
  ev.total_power_w =
      total_power(activation, ev.rates.per_ap_tx_w, ev.sum_rate_bps, cfg_.power, cfg_.num_ris);
  ev.ee = energy_efficiency(ev.sum_rate_bps, ev.total_power_w);

  const double qos = qos_rate_bps();
  ev.qos_ok = true;
  for (int k = 0; k < cfg_.num_ues; ++k)
    if (cfg_.bandwidth_hz * ev.rates.rate_se(k) < qos * (1.0 - kFeasSlack)) ev.qos_ok = false;
  ev.caps_ok = true;
  const double ue_cap = cfg_.max_ue_power_w * (1.0 + kFeasSlack);
  for (int k = 0; k < cfg_.num_ues; ++k)
    if (!(power(k) > 0.0) || power(k) > ue_cap) ev.caps_ok = false;
  const double ap_cap = cfg_.max_ap_power_w * (1.0 + kFeasSlack);
  for (int m = 0; m < cfg_.num_aps; ++m)
    if (ev.rates.per_ap_tx_w(m) > ap_cap) ev.caps_ok = false;
  return ev;
}

Vec SystemModel::project_power(const Precoder& precoder, const Vec& power) const {
  const Mat eta = precoder.v_active.cwiseAbs2();
  double load = 0.0;
  for (Eigen::Index m = 0; m < eta.rows(); ++m)
    load = std::max(load, eta.row(m).dot(power.transpose()));
  if (load <= cfg_.max_ap_power_w) return power;
  return power * (cfg_.max_ap_power_w / load);
}

}  // namespace cfris
