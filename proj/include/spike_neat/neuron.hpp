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

#ifndef SPIKE_NEAT_NEURON_HPP
#define SPIKE_NEAT_NEURON_HPP

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace spike_neat {

/// Izhikevich parameter set. `v_t` is the firing threshold in mV.
struct NeuronParams {
  double a = 0.02;
  double b = 0.2;
  double c = -65.0;
  double d = 2.0;
  double v_t = 30.0;

  void validate() const {
    if (!(a > 0.0)) throw std::invalid_argument("NeuronParams: a must be positive");
    if (!(v_t > c)) throw std::invalid_argument("NeuronParams: threshold v_t must exceed reset c");
  }

  /// Parameters used for every network neuron.
  static constexpr NeuronParams network_default() { return {}; }
  /// The c = -50 set used to reproduce the published f-I curve.
  static constexpr NeuronParams chattering() { return {0.02, 0.2, -50.0, 2.0, 30.0}; }
};

struct NeuronState {
  double v = 0.0;
  double u = 0.0;
  bool fired = false;
  int spike_count = 0;
  // Substeps owed from a tick cut short by a spike.
  int pending_substeps = 0;

  friend bool operator==(const NeuronState&, const NeuronState&) = default;
};

/// Substeps per millisecond of simulated time (0.05 ms Euler steps).
inline constexpr int kSubstepsPerMs = 20;

inline NeuronState neuron_init(const NeuronParams& p) {
  p.validate();
  return NeuronState{p.c, p.b * p.c, false, 0, 0};
}

/// Advances one neuron by `dt_ms` of simulated time under constant input
/// current `current`.
///
/// v and u are integrated together with explicit Euler at 1/kSubstepsPerMs ms.
/// The threshold is tested after every substep; on a crossing v is pinned at
/// v_t, then reset (v = c, u += d), `fired` is set and the remaining substeps
/// of this tick are deferred to the next call. At most one spike is reported
/// per tick.
inline NeuronState neuron_tick(NeuronState s, const NeuronParams& p, double current, double dt_ms = 1.0) {
  if (!std::isfinite(current)) throw std::invalid_argument("neuron_tick: non-finite input current");
  if (!(dt_ms > 0.0)) throw std::invalid_argument("neuron_tick: dt_ms must be positive");

  const int nominal = static_cast<int>(std::lround(dt_ms * kSubstepsPerMs));
  const int budget = nominal + s.pending_substeps;
  constexpr double h = 1.0 / kSubstepsPerMs;

  s.fired = false;
  int used = 0;
  while (used < budget) {
    const double dv = 0.04 * s.v * s.v + 5.0 * s.v + 140.0 - s.u + current;
    const double du = p.a * (p.b * s.v - s.u);
    s.v += h * dv;
    s.u += h * du;
    ++used;
    if (s.v >= p.v_t) {
      s.v = p.c;
      s.u += p.d;
      s.fired = true;
      ++s.spike_count;
      break;
    }
  }
  s.pending_substeps = std::min(budget - used, nominal);
  return s;
}

/// Mean firing rate (Hz) of an isolated neuron driven from rest by a constant
/// current for `window_ms` milliseconds.
inline double steady_rate_hz(const NeuronParams& p, double current, int window_ms) {
  NeuronState s = neuron_init(p);
  for (int t = 0; t < window_ms; ++t) s = neuron_tick(s, p, current);
  return 1000.0 * s.spike_count / window_ms;
}

struct FiPoint {
  double current;
  double rate_hz;
};

/// f-I curve sampled at `steps` evenly spaced currents in [i_min, i_max].
inline std::vector<FiPoint> fi_curve(const NeuronParams& p, double i_min, double i_max, int steps,
                                     int window_ms = 1000) {
  p.validate();
  if (!(i_min < i_max)) throw std::invalid_argument("fi_curve: require I_min < I_max");
  if (steps < 2) throw std::invalid_argument("fi_curve: require at least 2 steps");
  if (window_ms < 1000) throw std::invalid_argument("fi_curve: window must be at least 1000 ms");
  std::vector<FiPoint> out;
  out.reserve(steps);
  for (int k = 0; k < steps; ++k) {
    const double current = i_min + (i_max - i_min) * k / (steps - 1);
    out.push_back({current, steady_rate_hz(p, current, window_ms)});
  }
  return out;
}

inline std::string fi_curve_csv(const std::vector<FiPoint>& curve) {
  std::string out = "I_nA,rate_hz\n";
  char buf[64];
  for (const auto& pt : curve) {
    std::snprintf(buf, sizeof buf, "%.17g,%.17g\n", pt.current, pt.rate_hz);
    out += buf;
  }
  return out;
}

}  // namespace spike_neat

#endif  // SPIKE_NEAT_NEURON_HPP
