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

#include "cfris/config.hpp"

#include <fstream>
#include <functional>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>

namespace cfris {

const char* to_string(SolverMode mode) {
  return mode == SolverMode::kNearOptimal ? "near_optimal" : "low_complexity";
}

SolverMode solver_mode_from_string(const std::string& s) {
  if (s == "near_optimal") return SolverMode::kNearOptimal;
  if (s == "low_complexity") return SolverMode::kLowComplexity;
  throw std::invalid_argument("unknown solver mode: " + s);
}

void ScenarioConfig::validate() const {
  auto fail = [](const std::string& msg) { throw std::invalid_argument("config: " + msg); };
  if (num_aps < 1 || num_ues < 1) fail("num_aps and num_ues must be >= 1");
  if (num_ris < 0) fail("num_ris must be >= 0");
  if (num_ris > 0 && (ris_rows < 1 || ris_cols < 1)) fail("ris_rows/ris_cols must be >= 1");
  if (area_side_m <= 0) fail("area_side_m must be > 0");
  if (carrier_freq_hz <= 0 || bandwidth_hz <= 0) fail("carrier/bandwidth must be > 0");
  if (training_symbols >= coherence_symbols) fail("training_symbols must be < coherence_symbols");
  if (training_symbols < num_ues) fail("orthogonal pilots need training_symbols >= num_ues");
  if (pilot_power_w <= 0 || max_ap_power_w <= 0 || max_ue_power_w <= 0) fail("powers must be > 0");
  if (blockage_prob < 0 || blockage_prob > 1) fail("blockage_prob must be in [0, 1]");
  if (qos_min_se < 0) fail("qos_min_se must be >= 0");
  if (power.sleep_factor < 0 || power.sleep_factor > 1) fail("sleep_factor must be in [0, 1]");
  if (power.ap_fixed_w < 0 || power.cpu_fixed_w < 0 || power.cpu_per_gbps_w < 0 ||
      power.fh_fixed_w < 0 || power.fh_per_gbps_w < 0 || power.ris_static_w < 0)
    fail("power figures must be >= 0");
  if (solver.dinkelbach_tol < 0 || solver.ao_tol <= 0 || solver.sca_tol <= 0 ||
      solver.gp_tol <= 0 || solver.fd_step <= 0 || solver.pg_kkt_tol <= 0)
    fail("solver tolerances must be > 0");
  if (solver.woa_population < 2) fail("woa_population must be >= 2");
  if (solver.max_outer_iters < 1 || solver.ao_max_cycles < 1) fail("iteration caps must be >= 1");
}

namespace {

struct Binding {
  std::function<void(ScenarioConfig&, const std::string&)> set;
  std::function<std::string(const ScenarioConfig&)> get;
};

double parse_double(const std::string& v) {
  size_t pos = 0;
  const double x = std::stod(v, &pos);
  if (pos != v.size()) throw std::invalid_argument("trailing characters in number: " + v);
  return x;
}

int parse_int(const std::string& v) {
  size_t pos = 0;
  const long x = std::stol(v, &pos);
  if (pos != v.size()) throw std::invalid_argument("trailing characters in integer: " + v);
  return static_cast<int>(x);
}

bool parse_bool(const std::string& v) {
  if (v == "true" || v == "1") return true;
  if (v == "false" || v == "0") return false;
  throw std::invalid_argument("expected boolean, got: " + v);
}

std::string fmt_double(double x) {
  std::ostringstream os;
  os.precision(17);
  os << x;
  return os.str();
}

const std::map<std::string, Binding>& bindings() {
  static const std::map<std::string, Binding> kMap = [] {
    std::map<std::string, Binding> m;
    auto add_d = [&m](const std::string& k, double ScenarioConfig::* f) {
      m[k] = {[f](ScenarioConfig& c, const std::string& v) { c.*f = parse_double(v); },
              [f](const ScenarioConfig& c) { return fmt_double(c.*f); }};
    };
    auto add_i = [&m](const std::string& k, int ScenarioConfig::* f) {
      m[k] = {[f](ScenarioConfig& c, const std::string& v) { c.*f = parse_int(v); },
              [f](const ScenarioConfig& c) { return std::to_string(c.*f); }};
    };
    auto add_pd = [&m](const std::string& k, double PowerParams::* f) {
      m[k] = {[f](ScenarioConfig& c, const std::string& v) { c.power.*f = parse_double(v); },
              [f](const ScenarioConfig& c) { return fmt_double(c.power.*f); }};
    };
    auto add_sd = [&m](const std::string& k, double SolverParams::* f) {
      m[k] = {[f](ScenarioConfig& c, const std::string& v) { c.solver.*f = parse_double(v); },
              [f](const ScenarioConfig& c) { return fmt_double(c.solver.*f); }};
    };
    auto add_si = [&m](const std::string& k, int SolverParams::* f) {
      m[k] = {[f](ScenarioConfig& c, const std::string& v) { c.solver.*f = parse_int(v); },
              [f](const ScenarioConfig& c) { return std::to_string(c.solver.*f); }};
    };

    add_i("num_aps", &ScenarioConfig::num_aps);
    add_i("num_ues", &ScenarioConfig::num_ues);
    add_i("num_ris", &ScenarioConfig::num_ris);
    add_i("ris_rows", &ScenarioConfig::ris_rows);
    add_i("ris_cols", &ScenarioConfig::ris_cols);
    add_d("area_side_m", &ScenarioConfig::area_side_m);
    add_d("carrier_freq_hz", &ScenarioConfig::carrier_freq_hz);
    add_d("bandwidth_hz", &ScenarioConfig::bandwidth_hz);
    add_d("ris_element_spacing_m", &ScenarioConfig::ris_element_spacing_m);
    add_d("ap_height_m", &ScenarioConfig::ap_height_m);
    add_d("ue_height_m", &ScenarioConfig::ue_height_m);
    add_d("ris_height_m", &ScenarioConfig::ris_height_m);
    add_i("coherence_symbols", &ScenarioConfig::coherence_symbols);
    add_i("training_symbols", &ScenarioConfig::training_symbols);
    add_d("pilot_power_w", &ScenarioConfig::pilot_power_w);
    add_d("max_ap_power_w", &ScenarioConfig::max_ap_power_w);
    add_d("max_ue_power_w", &ScenarioConfig::max_ue_power_w);
    add_d("qos_min_se", &ScenarioConfig::qos_min_se);
    add_d("blockage_prob", &ScenarioConfig::blockage_prob);
    add_d("pathloss_ref_db", &ScenarioConfig::pathloss_ref_db);
    add_d("pathloss_exp_db", &ScenarioConfig::pathloss_exp_db);
    add_d("noise_figure_db", &ScenarioConfig::noise_figure_db);
    m["apply_prelog"] = {
        [](ScenarioConfig& c, const std::string& v) { c.apply_prelog = parse_bool(v); },
        [](const ScenarioConfig& c) { return c.apply_prelog ? "true" : "false"; }};
    m["rng_seed"] = {
        [](ScenarioConfig& c, const std::string& v) { c.rng_seed = std::stoull(v); },
        [](const ScenarioConfig& c) { return std::to_string(c.rng_seed); }};

    add_pd("ap_fixed_power_w", &PowerParams::ap_fixed_w);
    add_pd("cpu_fixed_power_w", &PowerParams::cpu_fixed_w);
    add_pd("cpu_power_per_gbps_w", &PowerParams::cpu_per_gbps_w);
    add_pd("fh_fixed_power_w", &PowerParams::fh_fixed_w);
    add_pd("fh_power_per_gbps_w", &PowerParams::fh_per_gbps_w);
    add_pd("ris_static_power_w", &PowerParams::ris_static_w);
    add_pd("sleep_saving_factor", &PowerParams::sleep_factor);

    add_sd("dinkelbach_tol", &SolverParams::dinkelbach_tol);
    add_sd("dinkelbach_abs_tol", &SolverParams::dinkelbach_abs_tol);
    add_si("max_outer_iters", &SolverParams::max_outer_iters);
    add_sd("ao_tol", &SolverParams::ao_tol);
    add_si("ao_max_cycles", &SolverParams::ao_max_cycles);
    add_sd("sca_tol", &SolverParams::sca_tol);
    add_si("sca_max_iters", &SolverParams::sca_max_iters);
    add_si("pg_max_iters", &SolverParams::pg_max_iters);
    add_sd("pg_kkt_tol", &SolverParams::pg_kkt_tol);
    add_sd("gp_tol", &SolverParams::gp_tol);
    add_si("gp_max_iters", &SolverParams::gp_max_iters);
    add_sd("fd_step", &SolverParams::fd_step);
    add_sd("armijo_init_step", &SolverParams::armijo_init_step);
    add_sd("armijo_shrink", &SolverParams::armijo_shrink);
    add_sd("armijo_slope", &SolverParams::armijo_slope);
    add_sd("armijo_min_step", &SolverParams::armijo_min_step);
    add_si("woa_population", &SolverParams::woa_population);
    add_si("woa_max_iters", &SolverParams::woa_max_iters);
    add_sd("woa_spiral_b", &SolverParams::woa_spiral_b);
    add_sd("power_floor_frac", &SolverParams::power_floor_frac);
    m["bnb_node_cap"] = {
        [](ScenarioConfig& c, const std::string& v) { c.solver.bnb_node_cap = std::stoll(v); },
        [](const ScenarioConfig& c) { return std::to_string(c.solver.bnb_node_cap); }};
    m["heuristic_full_sum"] = {
        [](ScenarioConfig& c, const std::string& v) { c.solver.heuristic_full_sum = parse_bool(v); },
        [](const ScenarioConfig& c) { return c.solver.heuristic_full_sum ? "true" : "false"; }};
    m["solver_mode"] = {
        [](ScenarioConfig& c, const std::string& v) { c.solver.mode = solver_mode_from_string(v); },
        [](const ScenarioConfig& c) { return std::string(to_string(c.solver.mode)); }};
    return m;
  }();
  return kMap;
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

}  // namespace

ScenarioConfig parse_config(std::istream& in, const std::string& origin) {
  ScenarioConfig cfg;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw std::invalid_argument(origin + ":" + std::to_string(lineno) + ": expected key = value");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    const auto it = bindings().find(key);
    if (it == bindings().end())
      throw std::invalid_argument(origin + ":" + std::to_string(lineno) + ": unknown key '" + key + "'");
    try {
      it->second.set(cfg, value);
    } catch (const std::exception& e) {
      throw std::invalid_argument(origin + ":" + std::to_string(lineno) + ": " + e.what());
    }
  }
  cfg.validate();
  return cfg;
}

ScenarioConfig load_config(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw std::runtime_error("cannot open config file: " + path);
  return parse_config(f, path);
}

void write_config(std::ostream& out, const ScenarioConfig& cfg) {
  for (const auto& [key, binding] : bindings()) out << key << " = " << binding.get(cfg) << "\n";
}

}  // namespace cfris
