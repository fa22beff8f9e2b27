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

#include <string>
#include <vector>

#include "cfris/optimizer.hpp"

namespace cfris {

enum class Scheme {
  kProposedNearOptimal,   // BnB + SCA + GP over all three variable blocks
  kProposedLowComplexity, // greedy + SCA + WOA
  kNoRis,                 // L = 0, all APs active, EE-optimized power
  kRandomRis,             // uniform random phases, all active, EE-optimized power
  kAllActiveOptRis,       // optimized phases + power, no sleep
};

const char* to_string(Scheme s);
Scheme scheme_from_string(const std::string& s);

enum class SweepAxis { kNone, kUes, kAps, kRis };

const char* to_string(SweepAxis a);
SweepAxis sweep_axis_from_string(const std::string& s);

struct ExperimentSpec {
  ScenarioConfig base;
  SweepAxis axis = SweepAxis::kNone;
  std::vector<int> values;   // ignored for kNone
  int trials = 1;
  std::vector<Scheme> schemes{Scheme::kProposedLowComplexity, Scheme::kNoRis,
                              Scheme::kRandomRis, Scheme::kAllActiveOptRis};
  std::uint64_t master_seed = 1;
  int workers = 1;
};

struct TrialResult {
  Scheme scheme{};
  int axis_value = 0;
  int trial = 0;
  std::uint64_t seed = 0;   // channel seed of the trial
  SolveStatus status = SolveStatus::kOk;
  double ee = 0;
  double sum_rate_bps = 0;
  double total_power_w = 0;
  int active_aps = 0;
  int outer_iters = 0;
  std::uint64_t ap_evals = 0;
  std::uint64_t power_solves = 0;
  std::uint64_t ris_evals = 0;
  double wall_ms = 0;
};

struct AggregateRow {
  Scheme scheme{};
  int axis_value = 0;
  int count = 0;        // feasible trials
  int infeasible = 0;
  double mean_ee = 0;
  double stderr_ee = 0; // sample sd / sqrt(n)
  double median_ee = 0;
};

/// Per-trial seed derivation (documented splitting rule): the channel seed is
/// master forked by (axis value, trial) only, so every scheme of a trial sees
/// the same drop; the scheme id is mixed in solely for solver randomness.
std::uint64_t trial_channel_seed(std::uint64_t master, int axis_value, int trial);

/// Runs one scheme on an already-drawn coherence block.
TrialResult run_scheme(const SystemModel& model, Scheme scheme, std::uint64_t master_seed,
                       int axis_value, int trial, SolveTrace* trace = nullptr);

/// Full sweep: one SystemModel per (axis value, trial), shared by all
/// schemes. Rows come back sorted by (axis order, trial, scheme order).
std::vector<TrialResult> run_experiment(const ExperimentSpec& spec);

/// Per-(scheme, axis value) mean / standard error / median over feasible
/// trials; infeasible trials are counted and excluded.
std::vector<AggregateRow> emit_plot_data(const std::vector<TrialResult>& rows);

void write_raw_csv(std::ostream& out, const std::vector<TrialResult>& rows,
                   bool emit_timing = false);
void write_aggregate_csv(std::ostream& out, const std::vector<AggregateRow>& rows);
void write_manifest(std::ostream& out, const ExperimentSpec& spec);

}  // namespace cfris
