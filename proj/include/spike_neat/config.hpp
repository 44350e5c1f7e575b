/*
 Copyright 2026 The spike-neat Authors

 Licensed under the Apache License, Version 2.0 (the "License");
 you may not use this file except in compliance with the License.
 You may obtain a copy of the License at

      https://www.apache.org/licenses/LICENSE-2.0

 Unless required by applicable law or agreed to in writing, software
 distributed under the License is distributed on an "AS IS" BASIS,
 WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 See the License for the specific language governing permissions and
 limitations under the License.
*/

#ifndef SPIKE_NEAT_CONFIG_HPP
#define SPIKE_NEAT_CONFIG_HPP

#include <cstdint>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>

#include "spike_neat/cartpole.hpp"
#include "spike_neat/phenotype.hpp"
#include "spike_neat/population.hpp"

namespace spike_neat {

enum class Task { markovian, non_markovian };

/// Everything one evolutionary run depends on.
///
/// `apply_task_defaults` fills the task-dependent fields (time step, success
/// horizon, decoder, input encoding, sigma-aware distance); explicit keys in a
/// config file override them.
struct TaskConfig {
  Task task = Task::markovian;
  NodeKind phenotype = NodeKind::spiking;
  std::uint64_t seed = 1;
  long success_steps = 100000;
  int max_generations = 100;

  cartpole::Params plant;
  cartpole::ObservationRanges ranges;
  double initial_spread = 0.1;     // Markovian start: uniform over this fraction of each range
  double initial_theta_deg = 3.0;  // non-Markovian start

  EvolutionParams evolution;
  CodecConfig codec;

  bool markovian() const { return task == Task::markovian; }
  int n_inputs() const { return markovian() ? 4 : 2; }
  /// Generation count recorded for a failed run.
  int failure_generations() const { return max_generations + 1; }

  void apply_task_defaults() {
    if (markovian()) {
      plant.tau = 0.02;
      success_steps = 100000;
      codec.decoder = ForceDecoder::binary;
      codec.snn.encoding = InputEncoding::probabilistic;
      codec.snn.rate_window = 20;
      evolution.use_sigma = false;
    } else {
      plant.tau = 0.01;
      success_steps = 5000;
      codec.decoder = ForceDecoder::continuous;
      codec.snn.encoding = InputEncoding::current;
      codec.snn.rate_window = 50;
      evolution.use_sigma = phenotype == NodeKind::spiking;
    }
  }

  static TaskConfig defaults(Task task, NodeKind phenotype) {
    TaskConfig c;
    c.task = task;
    c.phenotype = phenotype;
    c.apply_task_defaults();
    return c;
  }
};

namespace detail {

inline double to_double(const std::string& key, const std::string& v) {
  std::size_t pos = 0;
  double out = 0.0;
  try {
    out = std::stod(v, &pos);
  } catch (const std::exception&) {
    pos = 0;
  }
  if (pos != v.size()) throw std::invalid_argument("config: '" + key + "' expects a number, got '" + v + "'");
  return out;
}

inline long long to_integer(const std::string& key, const std::string& v) {
  std::size_t pos = 0;
  long long out = 0;
  try {
    out = std::stoll(v, &pos);
  } catch (const std::exception&) {
    pos = 0;
  }
  if (pos != v.size() || out < 0) throw std::invalid_argument("config: '" + key + "' expects a non-negative integer, got '" + v + "'");
  return out;
}

inline bool to_bool(const std::string& key, const std::string& v) {
  if (v == "1" || v == "true") return true;
  if (v == "0" || v == "false") return false;
  throw std::invalid_argument("config: '" + key + "' expects true/false, got '" + v + "'");
}

inline std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

}  // namespace detail

/// Parses `key = value` lines ('#' starts a comment). Unknown keys and
/// duplicates are errors. `task` and `phenotype` are applied first so that the
/// remaining keys override the task defaults regardless of line order.
inline TaskConfig parse_config(const std::string& text) {
  std::map<std::string, std::string> kv;
  std::istringstream in(text);
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = detail::trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw std::invalid_argument("config line " + std::to_string(line_no) + ": expected 'key = value'");
    const auto key = detail::trim(line.substr(0, eq));
    const auto value = detail::trim(line.substr(eq + 1));
    if (key.empty() || value.empty())
      throw std::invalid_argument("config line " + std::to_string(line_no) + ": empty key or value");
    if (!kv.emplace(key, value).second) throw std::invalid_argument("config: duplicate key '" + key + "'");
  }

  TaskConfig c;
  if (auto it = kv.find("task"); it != kv.end()) {
    if (it->second == "markovian") c.task = Task::markovian;
    else if (it->second == "non_markovian") c.task = Task::non_markovian;
    else throw std::invalid_argument("config: task must be markovian or non_markovian");
    kv.erase(it);
  }
  if (auto it = kv.find("phenotype"); it != kv.end()) {
    if (it->second == "spiking") c.phenotype = NodeKind::spiking;
    else if (it->second == "sigmoid") c.phenotype = NodeKind::sigmoid;
    else throw std::invalid_argument("config: phenotype must be spiking or sigmoid");
    kv.erase(it);
  }
  c.apply_task_defaults();

  using Setter = std::function<void(const std::string&, const std::string&)>;
  auto num = [](double& field) -> Setter { return [&field](const auto& k, const auto& v) { field = detail::to_double(k, v); }; };
  auto boolean = [](bool& field) -> Setter { return [&field](const auto& k, const auto& v) { field = detail::to_bool(k, v); }; };
  auto& ev = c.evolution;
  auto& mu = ev.mutation;
  auto& snn = c.codec.snn;
  const std::map<std::string, Setter> setters = {
      {"seed", [&](const auto& k, const auto& v) { c.seed = static_cast<std::uint64_t>(detail::to_integer(k, v)); }},
      {"success_steps", [&](const auto& k, const auto& v) { c.success_steps = static_cast<long>(detail::to_integer(k, v)); }},
      {"max_generations", [&](const auto& k, const auto& v) { c.max_generations = static_cast<int>(detail::to_integer(k, v)); }},
      {"population_size", [&](const auto& k, const auto& v) { ev.population_size = static_cast<std::size_t>(detail::to_integer(k, v)); }},
      {"tau", num(c.plant.tau)},
      {"gravity", num(c.plant.g)},
      {"cart_mass", num(c.plant.m_cart)},
      {"pole_mass", num(c.plant.m_pole)},
      {"pole_half_length", num(c.plant.half_length)},
      {"x_limit", num(c.plant.x_limit)},
      {"theta_limit_deg", [&](const auto& k, const auto& v) { c.plant.theta_limit = cartpole::deg_to_rad(detail::to_double(k, v)); }},
      {"x_range", num(c.ranges.x)},
      {"x_dot_range", num(c.ranges.x_dot)},
      {"theta_range_deg", [&](const auto& k, const auto& v) { c.ranges.theta = cartpole::deg_to_rad(detail::to_double(k, v)); }},
      {"theta_dot_range", num(c.ranges.theta_dot)},
      {"initial_spread", num(c.initial_spread)},
      {"initial_theta_deg", num(c.initial_theta_deg)},
      {"c1", num(ev.coeffs.c1)},
      {"c2", num(ev.coeffs.c2)},
      {"c3", num(ev.coeffs.c3)},
      {"c4", num(ev.coeffs.c4)},
      {"delta_t", num(ev.delta_t)},
      {"use_sigma", boolean(ev.use_sigma)},
      {"crossover_prob", num(ev.crossover_prob)},
      {"staleness_limit", [&](const auto& k, const auto& v) { ev.staleness_limit = static_cast<int>(detail::to_integer(k, v)); }},
      {"elite_min_size", [&](const auto& k, const auto& v) { ev.elite_min_size = static_cast<std::size_t>(detail::to_integer(k, v)); }},
      {"parent_fraction", num(ev.parent_fraction)},
      {"p_add_node", num(mu.add_node)},
      {"p_add_connection", num(mu.add_connection)},
      {"p_weight", num(mu.weight)},
      {"weight_perturb", num(mu.weight_perturb)},
      {"p_weight_replace", num(mu.weight_replace)},
      {"weight_limit", num(mu.weight_limit)},
      {"new_weight_range", num(mu.new_weight_range)},
      {"p_sigma", num(mu.sigma)},
      {"sigma_step", num(mu.sigma_step)},
      {"sigma_min", num(mu.sigma_min)},
      {"sigma_max", num(mu.sigma_max)},
      {"background_current", num(snn.background_current)},
      {"rate_window", [&](const auto& k, const auto& v) { snn.rate_window = static_cast<int>(detail::to_integer(k, v)); }},
      {"synaptic_gain", num(snn.synaptic_gain)},
      {"max_current", num(snn.max_current)},
      {"input_current_max", num(snn.input_current_max)},
      {"encoding", [&](const auto&, const auto& v) {
         if (v == "probabilistic") snn.encoding = InputEncoding::probabilistic;
         else if (v == "current") snn.encoding = InputEncoding::current;
         else throw std::invalid_argument("config: encoding must be probabilistic or current");
       }},
      {"decoder", [&](const auto&, const auto& v) {
         if (v == "binary") c.codec.decoder = ForceDecoder::binary;
         else if (v == "continuous") c.codec.decoder = ForceDecoder::continuous;
         else throw std::invalid_argument("config: decoder must be binary or continuous");
       }},
      {"binary_baseline", num(c.codec.binary_baseline)},
      {"binary_baseline_mode", [&](const auto&, const auto& v) {
         if (v == "neutral") c.codec.baseline_mode = BinaryBaseline::neutral;
         else if (v == "background") c.codec.baseline_mode = BinaryBaseline::background;
         else throw std::invalid_argument("config: binary_baseline_mode must be neutral or background");
       }},
      {"calibration_steps", [&](const auto& k, const auto& v) { c.codec.calibration_steps = static_cast<int>(detail::to_integer(k, v)); }},
      {"force_magnitude", num(c.codec.force_magnitude)},
      {"sigmoid_slope", num(c.codec.sigmoid_slope)},
  };
  for (const auto& [key, value] : kv) {
    auto it = setters.find(key);
    if (it == setters.end()) throw std::invalid_argument("config: unknown key '" + key + "'");
    it->second(key, value);
  }

  if (ev.population_size < 1) throw std::invalid_argument("config: population_size must be >= 1");
  if (c.max_generations < 1) throw std::invalid_argument("config: max_generations must be >= 1");
  if (snn.rate_window < 1) throw std::invalid_argument("config: rate_window must be >= 1");
  if (c.codec.calibration_steps < 2) throw std::invalid_argument("config: calibration_steps must be >= 2");
  if (!(c.plant.tau > 0.0)) throw std::invalid_argument("config: tau must be positive");
  return c;
}

inline TaskConfig load_config(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw std::runtime_error("cannot open config file '" + path + "'");
  std::ostringstream ss;
  ss << f.rdbuf();
  return parse_config(ss.str());
}

}  // namespace spike_neat

#endif  // SPIKE_NEAT_CONFIG_HPP
