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

#include "cfris/channel.hpp"

#include <Eigen/Eigenvalues>
#include <ostream>
#include <stdexcept>

namespace cfris {

CVec RisPhase::coefficients(int l) const {
  CVec c(elements_per_ris);
  for (int n = 0; n < elements_per_ris; ++n) {
    const double t = angles(static_cast<Eigen::Index>(l) * elements_per_ris + n);
    c(n) = cplx(std::cos(t), std::sin(t));
  }
  return c;
}

void RisPhase::wrap() {
  for (Eigen::Index i = 0; i < angles.size(); ++i) angles(i) = wrap_angle(angles(i));
}

RisPhase RisPhase::zeros(int num_ris, int elements_per_ris) {
  RisPhase p;
  p.elements_per_ris = elements_per_ris;
  p.angles = Vec::Zero(static_cast<Eigen::Index>(num_ris) * elements_per_ris);
  return p;
}

RisPhase RisPhase::random(int num_ris, int elements_per_ris, Rng& rng) {
  RisPhase p;
  p.elements_per_ris = elements_per_ris;
  p.angles.resize(static_cast<Eigen::Index>(num_ris) * elements_per_ris);
  for (Eigen::Index i = 0; i < p.angles.size(); ++i) p.angles(i) = rng.uniform(0.0, 2.0 * kPi);
  return p;
}

CVec array_response(double theta, double phi, int n_y, int n_z, double spacing_m,
                    double lambda_m) {
  if (n_y < 1 || n_z < 1) throw std::invalid_argument("array_response: n_y, n_z must be >= 1");
  if (spacing_m <= 0 || lambda_m <= 0)
    throw std::invalid_argument("array_response: spacing and wavelength must be > 0");
  const double scale = 2.0 * kPi * spacing_m / lambda_m;
  const double horiz = scale * std::sin(theta) * std::cos(phi);
  const double vert = scale * std::sin(phi);
  CVec a(static_cast<Eigen::Index>(n_y) * n_z);
  for (int ay = 0; ay < n_y; ++ay)
    for (int bz = 0; bz < n_z; ++bz) {
      const double ph = ay * horiz + bz * vert;
      a(static_cast<Eigen::Index>(ay) * n_z + bz) = cplx(std::cos(ph), std::sin(ph));
    }
  return a;
}

Mat spatial_correlation(int n_y, int n_z, double spacing_m, double lambda_m) {
  if (n_y < 1 || n_z < 1) throw std::invalid_argument("spatial_correlation: n_y, n_z must be >= 1");
  const int n = n_y * n_z;
  auto sinc = [](double x) { return x == 0.0 ? 1.0 : std::sin(kPi * x) / (kPi * x); };
  Mat r(n, n);
  for (int u = 0; u < n; ++u) {
    const double uy = (u / n_z) * spacing_m, uz = (u % n_z) * spacing_m;
    for (int v = 0; v <= u; ++v) {
      const double vy = (v / n_z) * spacing_m, vz = (v % n_z) * spacing_m;
      const double dist = std::hypot(uy - vy, uz - vz);
      r(u, v) = r(v, u) = sinc(2.0 * dist / lambda_m);
    }
  }
  // clip tiny negative eigenvalues so downstream Gaussian factors exist
  Eigen::SelfAdjointEigenSolver<Mat> eig(r);
  Vec vals = eig.eigenvalues().cwiseMax(0.0);
  return eig.eigenvectors() * vals.asDiagonal() * eig.eigenvectors().transpose();
}

namespace {

// Azimuth/elevation of the unit vector from the RIS to `target`, in the
// surface's local frame (x toward boresight, z up).
void local_angles(const Point3& ris, double boresight, const Point3& target, double& theta,
                  double& phi) {
  const double d = distance(ris, target);
  const double ux = (target[0] - ris[0]) / d;
  const double uy = (target[1] - ris[1]) / d;
  const double uz = (target[2] - ris[2]) / d;
  const double c = std::cos(boresight), s = std::sin(boresight);
  const double lx = c * ux + s * uy;
  const double ly = -s * ux + c * uy;
  theta = std::atan2(ly, lx);
  phi = std::asin(std::clamp(uz, -1.0, 1.0));
}

cplx distance_phase(double d_m, double lambda_m) {
  const double ph = -2.0 * kPi * std::fmod(d_m, lambda_m) / lambda_m;
  return {std::cos(ph), std::sin(ph)};
}

}  // namespace

ChannelRealization sample_channels(const ScenarioConfig& cfg, const Topology& topo,
                                   const LinkStatsSet& stats, Rng& rng) {
  const int M = cfg.num_aps, K = cfg.num_ues, L = cfg.num_ris;
  const int N = L > 0 ? cfg.ris_elements() : 0;
  const double lambda = cfg.wavelength_m();
  const double d_r = cfg.ris_spacing_m();

  ChannelRealization real;
  real.num_aps = M;
  real.num_ues = K;
  real.num_ris = L;
  real.ris_elements = N;
  real.h_au.resize(M, K);
  real.h_au_mean.resize(M, K);
  real.beta_au.resize(M, K);
  real.kappa_au.resize(M, K);

  for (int k = 0; k < K; ++k)
    for (int m = 0; m < M; ++m) {
      const LinkStats& s = stats.ap_ue[m][k];
      real.beta_au(m, k) = s.beta;
      real.kappa_au(m, k) = s.kappa;
      const double los_amp = std::sqrt(s.beta * s.kappa / (s.kappa + 1.0));
      const cplx mean = los_amp * distance_phase(topo.d_ap_ue(m, k), lambda);
      real.h_au_mean(m, k) = mean;
      real.h_au(m, k) = mean + std::sqrt(s.beta / (s.kappa + 1.0)) * rng.cnormal();
    }

  if (L > 0) {
    Mat corr_raw = spatial_correlation(cfg.ris_cols, cfg.ris_rows, d_r, lambda);
    Eigen::SelfAdjointEigenSolver<Mat> eig(corr_raw);
    const Vec vals = eig.eigenvalues().cwiseMax(0.0);
    real.corr = eig.eigenvectors() * vals.asDiagonal() * eig.eigenvectors().transpose();
    const Mat corr_factor = eig.eigenvectors() * vals.cwiseSqrt().asDiagonal();

    real.h_ar.resize(L);
    for (int l = 0; l < L; ++l) {
      real.h_ar[l].resize(M, N);
      for (int m = 0; m < M; ++m) {
        double th, ph;
        local_angles(topo.ris_positions[l], topo.ris_boresight[l], topo.ap_positions[m], th, ph);
        const LinkStats& s = stats.ap_ris[m][l];
        const cplx amp = std::sqrt(s.beta) * distance_phase(topo.d_ap_ris(m, l), lambda);
        real.h_ar[l].row(m) =
            (amp * array_response(th, ph, cfg.ris_cols, cfg.ris_rows, d_r, lambda)).transpose();
      }
    }

    real.gamma_ru_scale.resize(L, K);
    real.h_ru.assign(L, std::vector<CVec>(K));
    real.h_ru_mean.assign(L, std::vector<CVec>(K));
    for (int l = 0; l < L; ++l)
      for (int k = 0; k < K; ++k) {
        const LinkStats& s = stats.ris_ue[l][k];
        const double nlos_var = s.beta / (s.kappa + 1.0);
        real.gamma_ru_scale(l, k) = nlos_var;
        CVec mean = CVec::Zero(N);
        if (s.kappa > 0.0) {
          double th, ph;
          local_angles(topo.ris_positions[l], topo.ris_boresight[l], topo.ue_positions[k], th, ph);
          mean = std::sqrt(s.beta * s.kappa / (s.kappa + 1.0)) *
                 distance_phase(topo.d_ris_ue(l, k), lambda) *
                 array_response(th, ph, cfg.ris_cols, cfg.ris_rows, d_r, lambda);
        }
        real.h_ru_mean[l][k] = mean;
        real.h_ru[l][k] = mean + std::sqrt(nlos_var) * (corr_factor * rng.cnormal_vector(N));
      }
  } else {
    real.gamma_ru_scale.resize(0, K);
    real.corr.resize(0, 0);
  }
  return real;
}

namespace {

CMat assemble(const ChannelRealization& real, const RisPhase& phase, const CMat& direct,
              const std::vector<std::vector<CVec>>& ris_ue) {
  CMat g = direct;
  for (int l = 0; l < real.num_ris; ++l) {
    const CVec phi = phase.coefficients(l);
    for (int k = 0; k < real.num_ues; ++k)
      g.col(k) += real.h_ar[l] * phi.cwiseProduct(ris_ue[l][k]);
  }
  return g;
}

}  // namespace

CMat effective_channel(const ChannelRealization& real, const RisPhase& phase) {
  if (real.num_ris > 0 && phase.elements_per_ris != real.ris_elements)
    throw std::invalid_argument("effective_channel: phase/realization dimension mismatch");
  return assemble(real, phase, real.h_au, real.h_ru);
}

CMat effective_channel_mean(const ChannelRealization& real, const RisPhase& phase) {
  if (real.num_ris > 0 && phase.elements_per_ris != real.ris_elements)
    throw std::invalid_argument("effective_channel_mean: phase/realization dimension mismatch");
  return assemble(real, phase, real.h_au_mean, real.h_ru_mean);
}

namespace {

void put_i64(std::ostream& out, std::int64_t v) {
  out.write(reinterpret_cast<const char*>(&v), sizeof(v));
}

void put_cmat(std::ostream& out, const CMat& m) {
  for (Eigen::Index r = 0; r < m.rows(); ++r)
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      const double re = m(r, c).real(), im = m(r, c).imag();
      out.write(reinterpret_cast<const char*>(&re), sizeof(re));
      out.write(reinterpret_cast<const char*>(&im), sizeof(im));
    }
}

}  // namespace

void dump_realization(std::ostream& out, const ChannelRealization& real) {
  out.write("CFRISCH1", 8);
  put_i64(out, real.num_aps);
  put_i64(out, real.num_ues);
  put_i64(out, real.num_ris);
  put_i64(out, real.ris_elements);
  put_cmat(out, real.h_au);
  put_cmat(out, real.h_au_mean);
  for (const auto& h : real.h_ar) put_cmat(out, h);
  for (int l = 0; l < real.num_ris; ++l)
    for (int k = 0; k < real.num_ues; ++k) {
      put_cmat(out, real.h_ru[l][k]);
      put_cmat(out, real.h_ru_mean[l][k]);
    }
}

}  // namespace cfris
