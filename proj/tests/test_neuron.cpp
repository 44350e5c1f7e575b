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

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <vector>

#include "oracles.hpp"
#include "spike_neat/neuron.hpp"

using namespace spike_neat;

namespace {

std::vector<long> spike_ticks(const NeuronParams& p, const std::vector<double>& currents) {
  std::vector<long> ticks;
  NeuronState s = neuron_init(p);
  for (std::size_t t = 0; t < currents.size(); ++t) {
    s = neuron_tick(s, p, currents[t]);
    if (s.fired) ticks.push_back(static_cast<long>(t));
  }
  return ticks;
}

}  // namespace

TEST(NeuronInit, RestingStateFollowsReset) {
  const auto s = neuron_init({0.02, 0.2, -65.0, 2.0, 30.0});
  EXPECT_EQ(s.v, -65.0);
  EXPECT_DOUBLE_EQ(s.u, -13.0);
  EXPECT_FALSE(s.fired);
  EXPECT_EQ(s.spike_count, 0);

  const auto s2 = neuron_init({0.02, 0.2, -50.0, 2.0, 30.0});
  EXPECT_EQ(s2.v, -50.0);
  EXPECT_DOUBLE_EQ(s2.u, -10.0);
}

TEST(NeuronInit, RejectsInvalidParams) {
  EXPECT_THROW(neuron_init({0.02, 0.2, -65.0, 2.0, -65.0}), std::invalid_argument);
  EXPECT_THROW(neuron_init({0.0, 0.2, -65.0, 2.0, 30.0}), std::invalid_argument);
  EXPECT_THROW(neuron_init({-0.1, 0.2, -65.0, 2.0, 30.0}), std::invalid_argument);
}

TEST(NeuronTick, RejectsNonFiniteCurrent) {
  const NeuronParams p;
  const auto s = neuron_init(p);
  EXPECT_THROW(neuron_tick(s, p, std::numeric_limits<double>::quiet_NaN()), std::invalid_argument);
  EXPECT_THROW(neuron_tick(s, p, std::numeric_limits<double>::infinity()), std::invalid_argument);
}

TEST(NeuronTick, SilentAtZeroCurrentAndSettlesToRest) {
  const NeuronParams p;
  NeuronState s = neuron_init(p);
  for (int t = 0; t < 1000; ++t) {
    s = neuron_tick(s, p, 0.0);
    ASSERT_FALSE(s.fired);
  }
  // Stable equilibrium of 0.04v^2 + (5 - b)v + 140 = 0.
  const double disc = (5.0 - p.b) * (5.0 - p.b) - 4.0 * 0.04 * 140.0;
  const double rest = (-(5.0 - p.b) - std::sqrt(disc)) / (2.0 * 0.04);
  EXPECT_NEAR(s.v, rest, 0.5);
  double ref_v = 0.0;
  EXPECT_EQ(oracle::izhikevich_spikes(p.a, p.b, p.c, p.d, p.v_t, 0.0, 1000.0, 0.001, &ref_v), 0);
  EXPECT_NEAR(s.v, ref_v, 0.5);
}

TEST(NeuronTick, ConstantCurrentFiresPeriodically) {
  const NeuronParams p;
  const auto ticks = spike_ticks(p, std::vector<double>(1000, 10.0));
  ASSERT_GT(ticks.size(), 5u);
  std::vector<long> isi;
  for (std::size_t k = 1; k < ticks.size(); ++k) isi.push_back(ticks[k] - ticks[k - 1]);
  // Adaptation settles within a few spikes; after that the train is periodic
  // up to tick quantisation.
  ASSERT_GT(isi.size(), 10u);
  const auto [lo, hi] = std::minmax_element(isi.begin() + 5, isi.end());
  EXPECT_LE(*hi - *lo, 1);
}

TEST(NeuronTick, SquareWaveSpikesOnlyInHighPhase) {
  const NeuronParams p;
  std::vector<double> current;
  for (int cycle = 0; cycle < 5; ++cycle) {
    current.insert(current.end(), 100, 0.0);
    current.insert(current.end(), 100, 10.0);
  }
  const auto ticks = spike_ticks(p, current);
  ASSERT_FALSE(ticks.empty());
  for (long t : ticks) EXPECT_EQ(current[static_cast<std::size_t>(t)], 10.0) << "spike at tick " << t;
  for (long hi_start = 100; hi_start < 1000; hi_start += 200) {
    EXPECT_TRUE(std::any_of(ticks.begin(), ticks.end(), [&](long t) { return t >= hi_start && t < hi_start + 100; }));
  }
}

TEST(NeuronTick, ResetAppliesExactlyOnFiringSubstep) {
  const NeuronParams p;
  // Starts just under threshold with a large drive: crosses on the first substep.
  NeuronState s{29.9, -10.0, false, 0, 0};
  const auto n = neuron_tick(s, p, 200.0);
  ASSERT_TRUE(n.fired);
  EXPECT_EQ(n.v, p.c);
  const double h = 1.0 / kSubstepsPerMs;
  EXPECT_DOUBLE_EQ(n.u, s.u + h * p.a * (p.b * s.v - s.u) + p.d);
  EXPECT_EQ(n.spike_count, 1);
}

TEST(NeuronTick, PropertiesUnderRandomDrive) {
  std::mt19937_64 gen(42);
  std::uniform_real_distribution<double> cur(0.0, 200.0);
  for (const auto& p : {NeuronParams::network_default(), NeuronParams::chattering()}) {
    NeuronState s = neuron_init(p);
    for (int t = 0; t < 5000; ++t) {
      const int before = s.spike_count;
      s = neuron_tick(s, p, cur(gen));
      ASSERT_LE(s.v, p.v_t);
      ASSERT_EQ(s.spike_count - before, s.fired ? 1 : 0);
      if (s.fired) {
        ASSERT_EQ(s.v, p.c);
      }
    }
  }
}

TEST(NeuronTick, DeterministicBitForBit) {
  std::mt19937_64 gen(7);
  std::uniform_real_distribution<double> cur(0.0, 60.0);
  std::vector<double> drive(3000);
  for (auto& x : drive) x = cur(gen);
  const NeuronParams p;
  NeuronState a = neuron_init(p), b = neuron_init(p);
  for (double x : drive) {
    a = neuron_tick(a, p, x);
    b = neuron_tick(b, p, x);
    ASSERT_EQ(a, b);
  }
}

TEST(NeuronTick, SpikeCountMatchesFineReference) {
  for (const auto& p : {NeuronParams::network_default(), NeuronParams::chattering()}) {
    for (double current : {0.0, 5.0, 10.0, 20.0}) {
      NeuronState s = neuron_init(p);
      for (int t = 0; t < 1000; ++t) s = neuron_tick(s, p, current);
      const int ref = oracle::izhikevich_spikes(p.a, p.b, p.c, p.d, p.v_t, current, 1000.0);
      EXPECT_LE(std::abs(s.spike_count - ref), 1) << "c=" << p.c << " I=" << current;
    }
  }
}

TEST(FiCurve, ZeroAtZeroAndMonotone) {
  const auto curve = fi_curve(NeuronParams::chattering(), 0.0, 200.0, 21);
  ASSERT_EQ(curve.size(), 21u);
  EXPECT_EQ(curve.front().current, 0.0);
  EXPECT_EQ(curve.front().rate_hz, 0.0);
  for (std::size_t k = 1; k < curve.size(); ++k) EXPECT_GE(curve[k].rate_hz, curve[k - 1].rate_hz);
  EXPECT_GE(steady_rate_hz(NeuronParams::chattering(), 100.0, 1000),
            steady_rate_hz(NeuronParams::chattering(), 50.0, 1000));
}

TEST(FiCurve, RejectsBadRanges) {
  const NeuronParams p;
  EXPECT_THROW(fi_curve(p, 10.0, 10.0, 5), std::invalid_argument);
  EXPECT_THROW(fi_curve(p, 0.0, 10.0, 1), std::invalid_argument);
  EXPECT_THROW(fi_curve(p, 0.0, 10.0, 5, 999), std::invalid_argument);
}

TEST(FiCurve, CsvHeader) {
  const auto csv = fi_curve_csv(fi_curve(NeuronParams::chattering(), 0.0, 10.0, 2));
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "I_nA,rate_hz");
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 3);
}
