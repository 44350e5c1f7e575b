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

#ifndef SPIKE_NEAT_SNN_HPP
#define SPIKE_NEAT_SNN_HPP

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "spike_neat/neuron.hpp"
#include "spike_neat/rng.hpp"

namespace spike_neat {

enum class NeuronRole { input, hidden, output };

enum class InputEncoding {
  probabilistic,  // input neurons are Bernoulli spike sources
  current,        // input neurons inject value * I_max straight into their targets
};

/// Background current at which an isolated default neuron fires at 40% of
/// its rate at I = 200. Computed once by bisection over the f-I relation.
inline double default_background_current() {
  static const double cached = [] {
    constexpr auto params = NeuronParams::network_default();
    constexpr int window = 1000;
    const double target = 0.4 * steady_rate_hz(params, 200.0, window);
    double lo = 0.0;
    double hi = 200.0;
    for (int i = 0; i < 60; ++i) {
      const double mid = 0.5 * (lo + hi);
      (steady_rate_hz(params, mid, window) >= target ? hi : lo) = mid;
    }
    return hi;
  }();
  return cached;
}

/// Firing probability per tick of an isolated default neuron at `current`.
inline double isolated_rate(double current) {
  return steady_rate_hz(NeuronParams::network_default(), current, 1000) / 1000.0;
}

struct SnnConfig {
  double background_current = default_background_current();
  int rate_window = 20;
  double synaptic_gain = 10.0;
  double max_current = 200.0;
  double input_current_max = 10.0;
  InputEncoding encoding = InputEncoding::probabilistic;
  bool record_trace = false;
};

struct Synapse {
  std::size_t source;
  std::size_t target;
  double weight;
};

struct SpikeRecord {
  long tick;
  std::size_t neuron;
  bool fired;
};

inline bool encode_probabilistic(double value, Rng& rng) {
  if (!(value >= 0.0 && value <= 1.0)) throw std::invalid_argument("encode_probabilistic: value outside [0,1]");
  return bernoulli(rng, value);
}

inline double encode_current(double value, double i_max) {
  if (!(value >= 0.0 && value <= 1.0)) throw std::invalid_argument("encode_current: value outside [0,1]");
  if (!(i_max > 0.0)) throw std::invalid_argument("encode_current: I_max must be positive");
  return value * i_max;
}

/// Bang-bang readout: +magnitude when the rate reaches the baseline.
inline double decode_binary(double rate, double baseline, double magnitude) {
  return rate >= baseline ? magnitude : -magnitude;
}

/// F = magnitude * (2 / (1 + exp(-sigma * sum w_i r_i)) - 1).
inline double decode_continuous(std::span<const double> rates, std::span<const double> weights, double sigma,
                                double magnitude = 10.0) {
  if (rates.size() != weights.size()) throw std::invalid_argument("decode_continuous: length mismatch");
  if (!(sigma > 0.0)) throw std::invalid_argument("decode_continuous: sigma must be positive");
  double sum = 0.0;
  for (std::size_t i = 0; i < rates.size(); ++i) sum += weights[i] * rates[i];
  // 2/(1+e^-x) - 1 == tanh(x/2); tanh keeps the map exactly odd.
  return magnitude * std::tanh(0.5 * sigma * sum);
}

/// Recurrent network of Izhikevich neurons with one-tick synaptic delay.
///
/// Each control step resets spike counters and runs `rate_window` ticks.
/// Membrane state and last-tick spike flags carry over between steps.
class SpikingNetwork {
 public:
  SpikingNetwork(std::vector<NeuronRole> roles, std::vector<Synapse> synapses, SnnConfig config,
                 NeuronParams params = NeuronParams::network_default())
      : roles_(std::move(roles)), synapses_(std::move(synapses)), config_(config), params_(params) {
    params_.validate();
    if (config_.rate_window < 1) throw std::invalid_argument("SpikingNetwork: rate_window must be >= 1");
    states_.assign(roles_.size(), neuron_init(params_));
    for (std::size_t i = 0; i < roles_.size(); ++i) {
      if (roles_[i] == NeuronRole::input) {
        inputs_.push_back(i);
        states_[i] = NeuronState{};
      }
    }
    for (const auto& s : synapses_) {
      if (s.source >= roles_.size() || s.target >= roles_.size())
        throw std::invalid_argument("SpikingNetwork: synapse references unknown neuron");
      if (roles_[s.target] == NeuronRole::input)
        throw std::invalid_argument("SpikingNetwork: synapse targets an input neuron");
    }
    input_values_.assign(roles_.size(), 0.0);
    currents_.assign(roles_.size(), 0.0);
    rates_.assign(roles_.size(), 0.0);
  }

  /// Runs one control step and returns per-neuron rates in [0, 1].
  const std::vector<double>& step(std::span<const double> inputs, Rng& rng) {
    if (inputs.size() != inputs_.size()) throw std::invalid_argument("SpikingNetwork::step: input length mismatch");
    for (std::size_t k = 0; k < inputs_.size(); ++k) {
      const double v = inputs[k];
      if (!(v >= 0.0 && v <= 1.0)) throw std::invalid_argument("SpikingNetwork::step: input outside [0,1]");
      input_values_[inputs_[k]] = v;
    }
    for (auto& s : states_) s.spike_count = 0;

    const bool current_inputs = config_.encoding == InputEncoding::current;
    for (int t = 0; t < config_.rate_window; ++t) {
      // Read all of last tick's spikes before writing any state.
      for (std::size_t i = 0; i < roles_.size(); ++i)
        currents_[i] = roles_[i] == NeuronRole::input ? 0.0 : config_.background_current;
      for (const auto& syn : synapses_) {
        if (current_inputs && roles_[syn.source] == NeuronRole::input) {
          currents_[syn.target] += syn.weight * encode_current(input_values_[syn.source], config_.input_current_max);
        } else if (states_[syn.source].fired) {
          currents_[syn.target] += syn.weight * config_.synaptic_gain;
        }
      }
      for (std::size_t i = 0; i < roles_.size(); ++i) {
        auto& s = states_[i];
        if (roles_[i] == NeuronRole::input) {
          if (!current_inputs) {
            s.fired = encode_probabilistic(input_values_[i], rng);
            s.spike_count += s.fired ? 1 : 0;
          }
        } else {
          s = neuron_tick(s, params_, std::clamp(currents_[i], 0.0, config_.max_current));
        }
        if (config_.record_trace) trace_.push_back({tick_, i, s.fired});
      }
      ++tick_;
    }

    for (std::size_t i = 0; i < roles_.size(); ++i) {
      if (current_inputs && roles_[i] == NeuronRole::input)
        rates_[i] = input_values_[i];
      else
        rates_[i] = static_cast<double>(states_[i].spike_count) / config_.rate_window;
    }
    return rates_;
  }

  std::size_t size() const { return roles_.size(); }
  std::size_t input_count() const { return inputs_.size(); }
  const std::vector<NeuronRole>& roles() const { return roles_; }
  const std::vector<Synapse>& synapses() const { return synapses_; }
  const std::vector<NeuronState>& states() const { return states_; }
  const std::vector<double>& rates() const { return rates_; }
  const SnnConfig& config() const { return config_; }
  const NeuronParams& params() const { return params_; }
  const std::vector<SpikeRecord>& trace() const { return trace_; }

  std::string trace_csv() const {
    std::string out = "tick,neuron_index,fired\n";
    char buf[64];
    for (const auto& r : trace_) {
      std::snprintf(buf, sizeof buf, "%ld,%zu,%d\n", r.tick, r.neuron, r.fired ? 1 : 0);
      out += buf;
    }
    return out;
  }

 private:
  std::vector<NeuronRole> roles_;
  std::vector<Synapse> synapses_;
  SnnConfig config_;
  NeuronParams params_;
  std::vector<NeuronState> states_;
  std::vector<std::size_t> inputs_;
  std::vector<double> input_values_;
  std::vector<double> currents_;
  std::vector<double> rates_;
  std::vector<SpikeRecord> trace_;
  long tick_ = 0;
};

}  // namespace spike_neat

#endif  // SPIKE_NEAT_SNN_HPP
