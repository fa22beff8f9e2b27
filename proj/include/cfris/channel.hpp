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

#include <iosfwd>
#include <vector>

#include "cfris/scenario.hpp"

namespace cfris {

/// RIS phase configuration: one angle per element, all surfaces stacked.
/// Unit-modulus coefficients are always regenerated from the angles, never
/// stored, so |phi| = 1 cannot drift.
struct RisPhase {
  Vec angles;            // length L*N, values in [0, 2*pi)
  int elements_per_ris = 0;

  int num_ris() const {
    return elements_per_ris == 0 ? 0 : static_cast<int>(angles.size()) / elements_per_ris;
  }
  /// exp(j*theta) for surface l.
  CVec coefficients(int l) const;
  void wrap();

  static RisPhase zeros(int num_ris, int elements_per_ris);
  static RisPhase random(int num_ris, int elements_per_ris, Rng& rng);
};

/// UPA response. Element (a*n_z + b), a in [0, n_y), b in [0, n_z):
/// exp(j * 2*pi * d/lambda * (a*sin(theta)*cos(phi) + b*sin(phi))).
/// theta is the local azimuth, phi the elevation.
CVec array_response(double theta, double phi, int n_y, int n_z, double spacing_m,
                    double lambda_m);

/// Isotropic-scattering correlation: R(u, v) = sinc(2*||loc_u - loc_v||/lambda)
/// with sinc(x) = sin(pi x)/(pi x). Real symmetric, unit diagonal, PSD up to
/// rounding.
Mat spatial_correlation(int n_y, int n_z, double spacing_m, double lambda_m);

/// One coherence block's true channels plus the large-scale statistics the
/// estimator needs.
struct ChannelRealization {
  int num_aps = 0, num_ues = 0, num_ris = 0, ris_elements = 0;

  CMat h_au;                        // M x K, direct links
  CMat h_au_mean;                   // M x K, LoS component of h_au
  std::vector<CMat> h_ar;           // L matrices, M x N, deterministic pure LoS
  std::vector<std::vector<CVec>> h_ru;       // [l][k], length N
  std::vector<std::vector<CVec>> h_ru_mean;  // [l][k]

  Mat beta_au;    // M x K
  Mat kappa_au;   // M x K
  Mat gamma_ru_scale;  // L x K, beta_ru/(kappa_ru + 1): Gamma_{ru,lk} = scale * corr
  Mat corr;       // N x N shared element correlation (eigenvalue-clipped)

  /// Covariance of the NLoS part of the RIS-UE link (l, k).
  Mat gamma_ru(int l, int k) const { return gamma_ru_scale(l, k) * corr; }
};

/// Draws one coherence block. Direct links are Rician with a distance-derived
/// deterministic LoS phase; AP-RIS links are deterministic; RIS-UE links are
/// correlated Rician. Draw order: h_au by (k outer, m inner), then per (l, k)
/// one N-vector for the RIS-UE scattered part.
ChannelRealization sample_channels(const ScenarioConfig& cfg, const Topology& topo,
                                   const LinkStatsSet& stats, Rng& rng);

/// Effective downlink channel of the composite (direct + L cascades) link:
/// column k is h_au[:,k] + sum_l H_ar[l] * (phi_l .* h_ru[l][k]).
CMat effective_channel(const ChannelRealization& real, const RisPhase& phase);

/// LoS component of the effective channel (the estimator's prior mean).
CMat effective_channel_mean(const ChannelRealization& real, const RisPhase& phase);

/// Binary regression dump: int64 dims header, then row-major complex doubles.
void dump_realization(std::ostream& out, const ChannelRealization& real);

}  // namespace cfris
