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

#include <CLI11.hpp>
#include <filesystem>
#include <fstream>
#include <iostream>

#include "cfris/harness.hpp"

namespace fs = std::filesystem;
using namespace cfris;

namespace {

ScenarioConfig load_or_default(const std::string& path) {
  return path.empty() ? ScenarioConfig{} : load_config(path);
}

std::ofstream open_out(const fs::path& p) {
  std::ofstream f(p, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open output file: " + p.string());
  return f;
}

int cmd_default_config(const std::string& out_path) {
  if (out_path.empty()) {
    write_config(std::cout, ScenarioConfig{});
  } else {
    auto f = open_out(out_path);
    write_config(f, ScenarioConfig{});
  }
  return 0;
}

int cmd_topology(const std::string& config_path, std::uint64_t seed, const std::string& out_path) {
  ScenarioConfig cfg = load_or_default(config_path);
  if (seed != 0) cfg.rng_seed = seed;
  Rng rng(cfg.rng_seed);
  const Topology topo = generate_topology(cfg, rng);
  if (out_path.empty()) {
    dump_topology(std::cout, topo);
  } else {
    auto f = open_out(out_path);
    dump_topology(f, topo);
  }
  return 0;
}

int cmd_channels(const std::string& config_path, std::uint64_t seed, const std::string& out_path) {
  ScenarioConfig cfg = load_or_default(config_path);
  if (seed != 0) cfg.rng_seed = seed;
  Rng rng(cfg.rng_seed);
  const Topology topo = generate_topology(cfg, rng);
  const LinkStatsSet stats = sample_all_link_stats(cfg, topo, rng);
  const ChannelRealization real = sample_channels(cfg, topo, stats, rng);
  auto f = open_out(out_path);
  dump_realization(f, real);
  std::cout << "wrote realization (M=" << real.num_aps << ", K=" << real.num_ues
            << ", L=" << real.num_ris << ", N=" << real.ris_elements << ") to " << out_path
            << "\n";
  return 0;
}

int cmd_solve(const std::string& config_path, std::uint64_t seed, const std::string& scheme_name,
              const std::string& mode_name, const std::string& trace_path) {
  ScenarioConfig cfg = load_or_default(config_path);
  if (seed != 0) cfg.rng_seed = seed;
  if (!mode_name.empty()) cfg.solver.mode = solver_mode_from_string(mode_name);
  const Scheme scheme = scheme_from_string(scheme_name);

  Rng channel_rng(trial_channel_seed(cfg.rng_seed, 0, 0));
  const SystemModel model = SystemModel::draw(cfg, channel_rng);
  SolveTrace trace;
  const TrialResult row = run_scheme(model, scheme, cfg.rng_seed, 0, 0, &trace);

  if (!trace_path.empty()) {
    auto f = open_out(trace_path);
    trace.write_csv(f);
  }
  std::cout.precision(10);
  std::cout << "scheme:        " << to_string(row.scheme) << "\n"
            << "status:        " << (row.status == SolveStatus::kOk ? "ok" : "infeasible") << "\n"
            << "EE:            " << row.ee << " bit/J\n"
            << "sum rate:      " << row.sum_rate_bps << " bit/s\n"
            << "total power:   " << row.total_power_w << " W\n"
            << "active APs:    " << row.active_aps << "/" << cfg.num_aps << "\n"
            << "outer iters:   " << row.outer_iters << "\n"
            << "objective evals (AP/power/RIS): " << row.ap_evals << "/" << row.power_solves
            << "/" << row.ris_evals << "\n"
            << "wall time:     " << row.wall_ms << " ms\n";
  return row.status == SolveStatus::kOk ? 0 : 2;
}

int cmd_run(const std::string& config_path, const std::string& axis_name,
            const std::vector<int>& values, int trials, const std::vector<std::string>& schemes,
            const std::string& mode_name, std::uint64_t seed, const std::string& out_dir,
            int workers, bool emit_timing) {
  ExperimentSpec spec;
  spec.base = load_or_default(config_path);
  if (!mode_name.empty()) spec.base.solver.mode = solver_mode_from_string(mode_name);
  spec.axis = sweep_axis_from_string(axis_name);
  spec.values = values;
  spec.trials = trials;
  spec.master_seed = seed != 0 ? seed : spec.base.rng_seed;
  spec.workers = workers;
  if (!schemes.empty()) {
    spec.schemes.clear();
    for (const auto& s : schemes) spec.schemes.push_back(scheme_from_string(s));
  }

  fs::create_directories(out_dir);
  const auto rows = run_experiment(spec);
  {
    auto f = open_out(fs::path(out_dir) / "raw.csv");
    write_raw_csv(f, rows, emit_timing);
  }
  {
    auto f = open_out(fs::path(out_dir) / "aggregate.csv");
    write_aggregate_csv(f, emit_plot_data(rows));
  }
  {
    auto f = open_out(fs::path(out_dir) / "manifest.txt");
    write_manifest(f, spec);
  }
  std::cout << "wrote " << rows.size() << " rows to " << out_dir << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"energy-efficiency simulator for multi-RIS-aided cell-free massive MIMO"};
  app.require_subcommand(1);

  std::string config_path, out_path, trace_path, out_dir;
  std::string axis_name = "none", mode_name, scheme_name = "proposed_low_complexity";
  std::vector<int> values;
  std::vector<std::string> schemes;
  std::uint64_t seed = 0;
  int trials = 1, workers = 1;
  bool emit_timing = false;

  auto* dflt = app.add_subcommand("default-config", "print the default configuration file");
  dflt->add_option("--out", out_path, "output path (stdout when omitted)");

  auto* topo = app.add_subcommand("topology", "dump a generated topology as text");
  topo->add_option("--config", config_path, "scenario config file");
  topo->add_option("--seed", seed, "override rng_seed");
  topo->add_option("--out", out_path, "output path (stdout when omitted)");

  auto* chan = app.add_subcommand("channels", "dump one channel realization (binary)");
  chan->add_option("--config", config_path, "scenario config file");
  chan->add_option("--seed", seed, "override rng_seed");
  chan->add_option("--out", out_path, "output path")->required();

  auto* solve = app.add_subcommand("solve", "run one scheme on one coherence block");
  solve->add_option("--config", config_path, "scenario config file");
  solve->add_option("--seed", seed, "override rng_seed");
  solve->add_option("--scheme", scheme_name, "scheme to run");
  solve->add_option("--mode", mode_name, "near_optimal | low_complexity");
  solve->add_option("--trace", trace_path, "write the per-iteration trace CSV here");

  auto* run = app.add_subcommand("run", "Monte Carlo experiment with sweeps and baselines");
  run->add_option("--config", config_path, "scenario config file");
  run->add_option("--axis", axis_name, "sweep axis: none | K | M | L");
  run->add_option("--values", values, "sweep values")->delimiter(',');
  run->add_option("--trials", trials, "trials per sweep value");
  run->add_option("--schemes", schemes, "schemes to run")->delimiter(',');
  run->add_option("--mode", mode_name, "near_optimal | low_complexity");
  run->add_option("--seed", seed, "master seed (default: config rng_seed)");
  run->add_option("--out", out_dir, "output directory")->required();
  run->add_option("--workers", workers, "worker threads");
  run->add_flag("--emit-timing", emit_timing, "include wall_ms in raw.csv");

  CLI11_PARSE(app, argc, argv);

  try {
    if (dflt->parsed()) return cmd_default_config(out_path);
    if (topo->parsed()) return cmd_topology(config_path, seed, out_path);
    if (chan->parsed()) return cmd_channels(config_path, seed, out_path);
    if (solve->parsed()) return cmd_solve(config_path, seed, scheme_name, mode_name, trace_path);
    if (run->parsed())
      return cmd_run(config_path, axis_name, values, trials, schemes, mode_name, seed, out_dir,
                     workers, emit_timing);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
