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

#ifndef SPIKE_NEAT_PHENOTYPE_HPP
#define SPIKE_NEAT_PHENOTYPE_HPP

#include <cmath>
#include <map>
#include <span>
#include <stdexcept>
#include <variant>
#include <vector>

#include "spike_neat/genome.hpp"
#include "spike_neat/snn.hpp"

namespace spike_neat {

/// Recurrent weighted-sum + steepened-sigmoid network, updated synchronously
/// once per control step. Input nodes take the current observation; every
/// other node reads its sources' activations from the previous step.
class SigmoidNetwork {
 public:
  SigmoidNetwork(std::vector<NeuronRole> roles, std::vector<Synapse> synapses, double slope = 4.9)
      : roles_(std::move(roles)), synapses_(std::move(synapses)), slope_(slope) {
    for (std::size_t i = 0; i < roles_.size(); ++i)
      if (roles_[i] == NeuronRole::input) inputs_.push_back(i);
    for (const auto& s : synapses_)
      if (s.source >= roles_.size() || s.target >= roles_.size())
        throw std::invalid_argument("SigmoidNetwork: synapse references unknown node");
    activation_.assign(roles_.size(), 0.0);
    next_.assign(roles_.size(), 0.0);
  }

  const std::vector<double>& step(std::span<const double> inputs) {
    if (inputs.size() != inputs_.size()) throw std::invalid_argument("SigmoidNetwork::step: input length mismatch");
    for (std::size_t k = 0; k < inputs_.size(); ++k) activation_[inputs_[k]] = inputs[k];
    std::fill(next_.begin(), next_.end(), 0.0);
    for (const auto& s : synapses_) next_[s.target] += s.weight * activation_[s.source];
    for (std::size_t i = 0; i < roles_.size(); ++i)
      next_[i] = roles_[i] == NeuronRole::input ? activation_[i] : 1.0 / (1.0 + std::exp(-slope_ * next_[i]));
    std::swap(activation_, next_);
    return activation_;
  }

  std::size_t size() const { return roles_.size(); }
  std::size_t input_count() const { return inputs_.size(); }
  const std::vector<double>& activations() const { return activation_; }
  const std::vector<NeuronRole>& roles() const { return roles_; }
  const std::vector<Synapse>& synapses() const { return synapses_; }

 private:
  std::vector<NeuronRole> roles_;
  std::vector<Synapse> synapses_;
  double slope_;
  std::vector<std::size_t> inputs_;
  std::vector<double> activation_;
  std::vector<double> next_;
};

enum class ForceDecoder { binary, continuous };

/// Reference rate the binary decoder compares the output against.
enum class BinaryBaseline {
  background,  // isolated-neuron rate at I_bg
  neutral,     // output rate of this network when every input sits at 0.5
};

struct CodecConfig {
  SnnConfig snn;
  ForceDecoder decoder = ForceDecoder::binary;
  double force_magnitude = 10.0;
  BinaryBaseline baseline_mode = BinaryBaseline::neutral;
  /// Fixed rate threshold for the binary decoder; overrides baseline_mode when >= 0.
  double binary_baseline = -1.0;
  int calibration_steps = 100;
  double sigmoid_slope = 4.9;

  double resolved_baseline() const {
    return binary_baseline >= 0.0 ? binary_baseline : isolated_rate(snn.background_current);
  }
};

namespace detail {

struct Layout {
  std::vector<NeuronRole> roles;
  std::vector<Synapse> synapses;
  std::size_t output = 0;
};

/// Node order in the phenotype follows genome node order.
inline Layout layout(const Genome& g) {
  check_well_formed(g);
  Layout l;
  std::map<int, std::size_t> index;
  bool have_output = false;
  for (const auto& n : g.nodes) {
    index[n.id] = l.roles.size();
    if (n.role == NeuronRole::output && !have_output) {
      l.output = l.roles.size();
      have_output = true;
    }
    l.roles.push_back(n.role);
  }
  if (!have_output) throw std::invalid_argument("decode: genome has no output node");
  for (const auto& c : g.connections)
    if (c.enabled) l.synapses.push_back({index.at(c.source), index.at(c.target), c.weight});
  return l;
}

}  // namespace detail

inline SpikingNetwork decode_spiking(const Genome& g, const SnnConfig& cfg) {
  auto l = detail::layout(g);
  return SpikingNetwork(std::move(l.roles), std::move(l.synapses), cfg);
}

inline SigmoidNetwork decode_sigmoid(const Genome& g, double slope = 4.9) {
  auto l = detail::layout(g);
  return SigmoidNetwork(std::move(l.roles), std::move(l.synapses), slope);
}

/// Spiking phenotype plus its force readout.
class SpikingController {
 public:
  SpikingController(const Genome& g, const CodecConfig& codec)
      : net_(decode_spiking(g, codec.snn)), decoder_(codec.decoder), magnitude_(codec.force_magnitude), sigma_(g.sigma) {
    const auto l = detail::layout(g);
    output_ = l.output;
    for (const auto& s : l.synapses) {
      if (s.target == output_) {
        readout_sources_.push_back(s.source);
        readout_weights_.push_back(s.weight);
      }
    }
    readout_rates_.resize(readout_sources_.size());
    if (decoder_ == ForceDecoder::binary) {
      if (codec.binary_baseline >= 0.0 || codec.baseline_mode == BinaryBaseline::background)
        baseline_ = codec.resolved_baseline();
      else
        baseline_ = neutral_rate(codec.calibration_steps);
    }
  }

  /// Mean output rate of a scratch copy of the network driven by the neutral
  /// observation (all inputs 0.5) on a fixed random stream. The first quarter
  /// of the run is discarded as transient.
  double neutral_rate(int steps) const {
    SpikingNetwork probe = net_;
    Rng rng(0x5eed);
    const std::vector<double> neutral(probe.input_count(), 0.5);
    const int skip = steps / 4;
    double sum = 0.0;
    for (int k = 0; k < steps; ++k) {
      const double r = probe.step(neutral, rng)[output_];
      if (k >= skip) sum += r;
    }
    return sum / (steps - skip);
  }

  double act(std::span<const double> observation, Rng& rng) {
    const auto& rates = net_.step(observation, rng);
    if (decoder_ == ForceDecoder::binary) return decode_binary(rates[output_], baseline_, magnitude_);
    for (std::size_t k = 0; k < readout_sources_.size(); ++k) readout_rates_[k] = rates[readout_sources_[k]];
    return decode_continuous(readout_rates_, readout_weights_, sigma_, magnitude_);
  }

  const SpikingNetwork& network() const { return net_; }
  double baseline() const { return baseline_; }

 private:
  SpikingNetwork net_;
  ForceDecoder decoder_;
  double magnitude_;
  double sigma_;
  double baseline_ = 0.0;
  std::size_t output_ = 0;
  std::vector<std::size_t> readout_sources_;
  std::vector<double> readout_weights_;
  std::vector<double> readout_rates_;
};

class SigmoidController {
 public:
  SigmoidController(const Genome& g, const CodecConfig& codec)
      : net_(decode_sigmoid(g, codec.sigmoid_slope)), decoder_(codec.decoder), magnitude_(codec.force_magnitude) {
    output_ = detail::layout(g).output;
    if (decoder_ == ForceDecoder::binary) {
      if (codec.binary_baseline >= 0.0)
        threshold_ = codec.binary_baseline;
      else if (codec.baseline_mode == BinaryBaseline::neutral)
        threshold_ = neutral_output(codec.calibration_steps);
    }
  }

  /// Output activation of a scratch copy settled under the neutral
  /// observation (all inputs 0.5).
  double neutral_output(int steps) const {
    SigmoidNetwork probe = net_;
    const std::vector<double> neutral(probe.input_count(), 0.5);
    double out = 0.5;
    for (int k = 0; k < steps; ++k) out = probe.step(neutral)[output_];
    return out;
  }

  double act(std::span<const double> observation, Rng&) {
    const double out = net_.step(observation)[output_];
    if (decoder_ == ForceDecoder::binary) return out >= threshold_ ? magnitude_ : -magnitude_;
    return magnitude_ * (2.0 * out - 1.0);
  }

  double threshold() const { return threshold_; }

  const SigmoidNetwork& network() const { return net_; }

 private:
  SigmoidNetwork net_;
  ForceDecoder decoder_;
  double magnitude_;
  double threshold_ = 0.5;
  std::size_t output_ = 0;
};

/// Observation -> force policy decoded from a genome of either kind.
class Controller {
 public:
  Controller(const Genome& g, const CodecConfig& codec)
      : impl_(g.kind() == NodeKind::spiking ? Impl{SpikingController(g, codec)} : Impl{SigmoidController(g, codec)}) {}

  double act(std::span<const double> observation, Rng& rng) {
    return std::visit([&](auto& c) { return c.act(observation, rng); }, impl_);
  }

  const SpikingController* spiking() const { return std::get_if<SpikingController>(&impl_); }
  const SigmoidController* sigmoid() const { return std::get_if<SigmoidController>(&impl_); }

 private:
  using Impl = std::variant<SpikingController, SigmoidController>;
  Impl impl_;
};

}  // namespace spike_neat

#endif  // SPIKE_NEAT_PHENOTYPE_HPP
