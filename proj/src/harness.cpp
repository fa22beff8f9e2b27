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

#include "cfris/harness.hpp"

#include <algorithm>
#include <chrono>
#include <mutex>
#include <numeric>
#include <ostream>
#include <stdexcept>
#include <thread>

namespace cfris {

const char* to_string(Scheme s) {
  switch (s) {
    case Scheme::kProposedNearOptimal: return "proposed_near_optimal";
    case Scheme::kProposedLowComplexity: return "proposed_low_complexity";
    case Scheme::kNoRis: return "no_ris";
    case Scheme::kRandomRis: return "random_ris";
    case Scheme::kAllActiveOptRis: return "all_active_opt_ris";
  }
  return "?";
}

Scheme scheme_from_string(const std::string& s) {
  for (Scheme v : {Scheme::kProposedNearOptimal, Scheme::kProposedLowComplexity, Scheme::kNoRis,
                   Scheme::kRandomRis, Scheme::kAllActiveOptRis})
    if (s == to_string(v)) return v;
  throw std::invalid_argument("unknown scheme: " + s);
}

const char* to_string(SweepAxis a) {
  switch (a) {
    case SweepAxis::kNone: return "none";
    case SweepAxis::kUes: return "K";
    case SweepAxis::kAps: return "M";
    case SweepAxis::kRis: return "L";
  }
  return "?";
}

SweepAxis sweep_axis_from_string(const std::string& s) {
  for (SweepAxis v : {SweepAxis::kNone, SweepAxis::kUes, SweepAxis::kAps, SweepAxis::kRis})
    if (s == to_string(v)) return v;
  throw std::invalid_argument("unknown sweep axis: " + s);
}

namespace {

ScenarioConfig apply_sweep(const ScenarioConfig& base, SweepAxis axis, int value) {
  ScenarioConfig cfg = base;
  switch (axis) {
    case SweepAxis::kNone: break;
    case SweepAxis::kUes: cfg.num_ues = value; break;
    case SweepAxis::kAps: cfg.num_aps = value; break;
    case SweepAxis::kRis: cfg.num_ris = value; break;
  }
  return cfg;
}

int scheme_id(Scheme s) { return static_cast<int>(s); }

const char* status_name(SolveStatus s) {
  switch (s) {
    case SolveStatus::kOk: return "ok";
    case SolveStatus::kInfeasibleQos: return "infeasible_qos";
    case SolveStatus::kSingularChannel: return "singular_channel";
  }
  return "?";
}

}  // namespace

std::uint64_t trial_channel_seed(std::uint64_t master, int axis_value, int trial) {
  return Rng(master).fork(static_cast<std::uint64_t>(axis_value)).fork(
      static_cast<std::uint64_t>(trial)).seed();
}

TrialResult run_scheme(const SystemModel& model, Scheme scheme, std::uint64_t master_seed,
                       int axis_value, int trial, SolveTrace* trace) {
  TrialResult row;
  row.scheme = scheme;
  row.axis_value = axis_value;
  row.trial = trial;
  row.seed = trial_channel_seed(master_seed, axis_value, trial);

  // solver randomness is scheme-specific; channels are not
  Rng solver_rng = Rng(row.seed).fork(1000 + scheme_id(scheme));

  SolveOptions opts;
  SolverParams sp = model.config().solver;
  switch (scheme) {
    case Scheme::kProposedNearOptimal:
      sp.mode = SolverMode::kNearOptimal;
      break;
    case Scheme::kProposedLowComplexity:
      sp.mode = SolverMode::kLowComplexity;
      break;
    case Scheme::kNoRis:
      opts.optimize_aps = false;
      opts.optimize_ris = false;
      break;
    case Scheme::kRandomRis:
      opts.optimize_aps = false;
      opts.optimize_ris = false;
      break;
    case Scheme::kAllActiveOptRis:
      opts.optimize_aps = false;
      break;
  }

  const SystemModel run_model =
      scheme == Scheme::kNoRis ? model.without_ris().with_solver(sp) : model.with_solver(sp);
  const int n_elems = run_model.config().ris_elements();
  const int n_ris = run_model.config().num_ris;
  RisPhase phase0 = scheme == Scheme::kNoRis
                        ? RisPhase::zeros(0, 0)
                        : RisPhase::random(n_ris, n_elems, solver_rng);

  const auto t0 = std::chrono::steady_clock::now();
  SolveResult sol = dinkelbach_solve(run_model, phase0, opts, solver_rng);
  const auto t1 = std::chrono::steady_clock::now();

  row.status = sol.status;
  if (sol.status == SolveStatus::kOk) {
    row.ee = sol.ee;
    row.sum_rate_bps = sol.eval.sum_rate_bps;
    row.total_power_w = sol.eval.total_power_w;
    row.active_aps = sol.state.activation.active_count();
    row.outer_iters = static_cast<int>(sol.trace.rows.size());
    row.ap_evals = sol.counters.ap_objective;
    row.power_solves = sol.counters.power_subproblems;
    row.ris_evals = sol.counters.ris_fitness;
  }
  row.wall_ms = std::chrono::duration<double, std::milli>(t1 - t0).count();
  if (trace) *trace = sol.trace;
  return row;
}

std::vector<TrialResult> run_experiment(const ExperimentSpec& spec) {
  spec.base.validate();
  if (spec.trials < 1) throw std::invalid_argument("run_experiment: trials must be >= 1");
  std::vector<int> values = spec.values;
  if (spec.axis == SweepAxis::kNone) values = {0};
  if (values.empty()) throw std::invalid_argument("run_experiment: sweep value list is empty");
  for (int v : values)
    if (spec.axis != SweepAxis::kNone && v < 1)
      throw std::invalid_argument("run_experiment: sweep values must be positive");

  struct Task {
    int value_idx;
    int trial;
  };
  std::vector<Task> tasks;
  for (int vi = 0; vi < static_cast<int>(values.size()); ++vi)
    for (int t = 0; t < spec.trials; ++t) tasks.push_back({vi, t});

  std::vector<std::vector<TrialResult>> per_task(tasks.size());
  std::mutex next_mutex;
  size_t next = 0;
  auto worker = [&] {
    for (;;) {
      size_t idx;
      {
        std::lock_guard<std::mutex> lock(next_mutex);
        if (next >= tasks.size()) return;
        idx = next++;
      }
      const Task task = tasks[idx];
      const int value = values[task.value_idx];
      const int axis_value = spec.axis == SweepAxis::kNone ? 0 : value;
      const ScenarioConfig cfg = apply_sweep(spec.base, spec.axis, value);
      Rng channel_rng(trial_channel_seed(spec.master_seed, axis_value, task.trial));
      const SystemModel model = SystemModel::draw(cfg, channel_rng);
      for (Scheme scheme : spec.schemes)
        per_task[idx].push_back(run_scheme(model, scheme, spec.master_seed, axis_value,
                                           task.trial));
    }
  };

  const int n_workers = std::max(1, std::min<int>(spec.workers, static_cast<int>(tasks.size())));
  if (n_workers == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(n_workers);
    for (int i = 0; i < n_workers; ++i) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }

  std::vector<TrialResult> rows;
  rows.reserve(tasks.size() * spec.schemes.size());
  for (auto& batch : per_task)
    for (auto& row : batch) rows.push_back(std::move(row));
  return rows;
}

std::vector<AggregateRow> emit_plot_data(const std::vector<TrialResult>& rows) {
  if (rows.empty()) throw std::invalid_argument("emit_plot_data: empty result table");
  // stable key order: first appearance in the row stream
  std::vector<AggregateRow> agg;
  std::vector<std::vector<double>> samples;
  auto find = [&](Scheme s, int v) -> size_t {
    for (size_t i = 0; i < agg.size(); ++i)
      if (agg[i].scheme == s && agg[i].axis_value == v) return i;
    agg.push_back({s, v, 0, 0, 0, 0, 0});
    samples.emplace_back();
    return agg.size() - 1;
  };
  for (const auto& row : rows) {
    const size_t i = find(row.scheme, row.axis_value);
    if (row.status == SolveStatus::kOk) {
      samples[i].push_back(row.ee);
    } else {
      ++agg[i].infeasible;
    }
  }
  for (size_t i = 0; i < agg.size(); ++i) {
    auto& s = samples[i];
    agg[i].count = static_cast<int>(s.size());
    if (s.empty()) continue;
    const double n = static_cast<double>(s.size());
    const double mean = std::accumulate(s.begin(), s.end(), 0.0) / n;
    agg[i].mean_ee = mean;
    if (s.size() > 1) {
      double ss = 0;
      for (double x : s) ss += (x - mean) * (x - mean);
      agg[i].stderr_ee = std::sqrt(ss / (n - 1.0)) / std::sqrt(n);
    }
    std::sort(s.begin(), s.end());
    agg[i].median_ee = s.size() % 2 == 1 ? s[s.size() / 2]
                                         : 0.5 * (s[s.size() / 2 - 1] + s[s.size() / 2]);
  }
  return agg;
}

void write_raw_csv(std::ostream& out, const std::vector<TrialResult>& rows, bool emit_timing) {
  out << "scheme,axis_value,trial,seed,status,ee_bits_per_joule,sum_rate_bps,total_power_w,"
         "active_aps,outer_iters,ap_evals,power_solves,ris_evals";
  if (emit_timing) out << ",wall_ms";
  out << "\n";
  out.precision(17);
  for (const auto& r : rows) {
    out << to_string(r.scheme) << "," << r.axis_value << "," << r.trial << "," << r.seed << ","
        << status_name(r.status) << "," << r.ee << "," << r.sum_rate_bps << ","
        << r.total_power_w << "," << r.active_aps << "," << r.outer_iters << "," << r.ap_evals
        << "," << r.power_solves << "," << r.ris_evals;
    if (emit_timing) out << "," << r.wall_ms;
    out << "\n";
  }
}

void write_aggregate_csv(std::ostream& out, const std::vector<AggregateRow>& rows) {
  out << "scheme,axis_value,trials_ok,trials_infeasible,mean_ee,stderr_ee,median_ee\n";
  out.precision(17);
  for (const auto& r : rows)
    out << to_string(r.scheme) << "," << r.axis_value << "," << r.count << "," << r.infeasible
        << "," << r.mean_ee << "," << r.stderr_ee << "," << r.median_ee << "\n";
}

void write_manifest(std::ostream& out, const ExperimentSpec& spec) {
  out << "# cfris run manifest\n";
  out << "version = 1.0.0\n";
  out << "master_seed = " << spec.master_seed << "\n";
  out << "sweep_axis = " << to_string(spec.axis) << "\n";
  out << "sweep_values =";
  if (spec.axis == SweepAxis::kNone) {
    out << " none";
  } else {
    for (int v : spec.values) out << " " << v;
  }
  out << "\n";
  out << "trials = " << spec.trials << "\n";
  out << "schemes =";
  for (Scheme s : spec.schemes) out << " " << to_string(s);
  out << "\n";
  out << "workers = " << spec.workers << "\n";
  out << "# resolved scenario configuration\n";
  write_config(out, spec.base);
}

}  // namespace cfris
