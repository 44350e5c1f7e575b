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
#include <random>
#include <vector>

#include "spike_neat/snn.hpp"

using namespace spike_neat;

namespace {

// Frozen with 40-digit arithmetic: 10 * (2 / (1 + exp(-0.7)) - 1).
constexpr double kContinuousExample = 3.363755443363322130;

std::vector<double> run_steps(SpikingNetwork& net, const std::vector<double>& inputs, int steps, Rng& rng) {
  std::vector<double> total(net.size(), 0.0);
  for (int k = 0; k < steps; ++k) {
    const auto& r = net.step(inputs, rng);
    for (std::size_t i = 0; i < r.size(); ++i) total[i] += r[i];
  }
  for (auto& x : total) x /= steps;
  return total;
}

}  // namespace

TEST(Encoders, ProbabilisticEdgesAndFrequency) {
  Rng rng(1);
  for (int i = 0; i < 1000; ++i) {
    ASSERT_FALSE(encode_probabilistic(0.0, rng));
    ASSERT_TRUE(encode_probabilistic(1.0, rng));
  }
  int hits = 0;
  for (int i = 0; i < 10000; ++i) hits += encode_probabilistic(0.5, rng) ? 1 : 0;
  EXPECT_GE(hits, 4700);
  EXPECT_LE(hits, 5300);
  EXPECT_THROW(encode_probabilistic(-0.01, rng), std::invalid_argument);
  EXPECT_THROW(encode_probabilistic(1.01, rng), std::invalid_argument);
}

TEST(Encoders, CurrentIsLinear) {
  EXPECT_EQ(encode_current(0.0, 40.0), 0.0);
  EXPECT_EQ(encode_current(1.0, 40.0), 40.0);
  EXPECT_EQ(encode_current(0.25, 40.0), 10.0);
  EXPECT_THROW(encode_current(0.5, -1.0), std::invalid_argument);
  EXPECT_THROW(encode_current(1.5, 40.0), std::invalid_argument);
}

TEST(Decoders, Binary) {
  EXPECT_EQ(decode_binary(0.8, 0.5, 10.0), 10.0);
  EXPECT_EQ(decode_binary(0.2, 0.5, 10.0), -10.0);
  EXPECT_EQ(decode_binary(0.5, 0.5, 10.0), 10.0);
}

TEST(Decoders, ContinuousValues) {
  const std::vector<double> zero_r{0.0, 0.0}, w{2.0, -1.0};
  EXPECT_EQ(decode_continuous(zero_r, w, 1.0), 0.0);
  const std::vector<double> big{1.0};
  const std::vector<double> big_w{1e6};
  EXPECT_NEAR(decode_continuous(big, big_w, 1.0), 10.0, 1e-12);
  const std::vector<double> r{0.5, 0.3};
  EXPECT_NEAR(decode_continuous(r, w, 1.0), kContinuousExample, 1e-13);
  // Same value through the logistic form written out directly.
  EXPECT_NEAR(decode_continuous(r, w, 1.0), 10.0 * (2.0 / (1.0 + std::exp(-0.7)) - 1.0), 1e-13);
}

TEST(Decoders, ContinuousRejectsBadArguments) {
  const std::vector<double> r{0.5}, w{1.0}, w2{1.0, 2.0};
  EXPECT_THROW(decode_continuous(r, w, 0.0), std::invalid_argument);
  EXPECT_THROW(decode_continuous(r, w, -1.0), std::invalid_argument);
  EXPECT_THROW(decode_continuous(r, w2, 1.0), std::invalid_argument);
}

TEST(Decoders, ContinuousIsOddAndBounded) {
  std::mt19937_64 gen(3);
  std::uniform_real_distribution<double> wd(-8.0, 8.0), rd(0.0, 1.0), sd(0.05, 20.0);
  for (int k = 0; k < 1000; ++k) {
    std::vector<double> r(3), w(3), nw(3);
    for (int i = 0; i < 3; ++i) {
      r[i] = rd(gen);
      w[i] = wd(gen);
      nw[i] = -w[i];
    }
    const double s = sd(gen);
    const double f = decode_continuous(r, w, s);
    ASSERT_EQ(decode_continuous(r, nw, s), -f);
    ASSERT_LE(std::abs(f), 10.0);
  }
}

TEST(SpikingNetwork, SilentWithoutBackground) {
  SnnConfig cfg;
  cfg.background_current = 0.0;
  SpikingNetwork net({NeuronRole::input, NeuronRole::input, NeuronRole::hidden, NeuronRole::output}, {}, cfg);
  Rng rng(5);
  const auto mean = run_steps(net, {0.7, 1.0}, 20, rng);
  EXPECT_EQ(mean[2], 0.0);
  EXPECT_EQ(mean[3], 0.0);
}

TEST(SpikingNetwork, BackgroundAloneMatchesIsolatedNeuron) {
  SnnConfig cfg;
  SpikingNetwork net({NeuronRole::input, NeuronRole::hidden, NeuronRole::output}, {}, cfg);
  Rng rng(5);
  // 50 steps of 20 ticks is the same 1000 ms window the f-I curve uses.
  const auto mean = run_steps(net, {0.5}, 50, rng);
  const double expected = isolated_rate(cfg.background_current);
  EXPECT_NEAR(mean[1], expected, 1e-12);
  EXPECT_NEAR(mean[2], expected, 1e-12);
  EXPECT_GT(mean[1], 0.0);
  EXPECT_NEAR(expected, 0.4 * isolated_rate(200.0), 0.01);
}

TEST(SpikingNetwork, ExcitatoryInputRaisesOutputRate) {
  SnnConfig cfg;
  SpikingNetwork base({NeuronRole::input, NeuronRole::output}, {}, cfg);
  SpikingNetwork driven({NeuronRole::input, NeuronRole::output}, {{0, 1, 8.0}}, cfg);
  Rng r1(9), r2(9);
  const auto b = run_steps(base, {1.0}, 50, r1);
  const auto d = run_steps(driven, {1.0}, 50, r2);
  EXPECT_GT(d[1], b[1]);
}

TEST(SpikingNetwork, CurrentEncodingDrivesTargetsDirectly) {
  SnnConfig cfg;
  cfg.encoding = InputEncoding::current;
  SpikingNetwork base({NeuronRole::input, NeuronRole::output}, {}, cfg);
  SpikingNetwork driven({NeuronRole::input, NeuronRole::output}, {{0, 1, 8.0}}, cfg);
  Rng r1(9), r2(9);
  const auto b = run_steps(base, {1.0}, 50, r1);
  const auto d = run_steps(driven, {1.0}, 50, r2);
  EXPECT_GT(d[1], b[1]);
  // Current-coded inputs report their drive value as their rate.
  EXPECT_EQ(d[0], 1.0);
}

TEST(SpikingNetwork, RejectsBadShapes) {
  SnnConfig cfg;
  EXPECT_THROW(SpikingNetwork({NeuronRole::input, NeuronRole::output}, {{0, 2, 1.0}}, cfg), std::invalid_argument);
  EXPECT_THROW(SpikingNetwork({NeuronRole::input, NeuronRole::output}, {{1, 0, 1.0}}, cfg), std::invalid_argument);
  SpikingNetwork net({NeuronRole::input, NeuronRole::output}, {}, cfg);
  Rng rng(1);
  const std::vector<double> two{0.1, 0.2}, bad{1.5};
  EXPECT_THROW(net.step(two, rng), std::invalid_argument);
  EXPECT_THROW(net.step(bad, rng), std::invalid_argument);
}

TEST(SpikingNetwork, RatesBoundedOnRandomRecurrentGraphs) {
  std::mt19937_64 gen(11);
  std::uniform_real_distribution<double> wd(-8.0, 8.0), in(0.0, 1.0);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<NeuronRole> roles{NeuronRole::input, NeuronRole::input, NeuronRole::output, NeuronRole::hidden,
                                  NeuronRole::hidden};
    std::vector<Synapse> syn;
    for (std::size_t s = 0; s < roles.size(); ++s)
      for (std::size_t t = 2; t < roles.size(); ++t)
        if (in(gen) < 0.6) syn.push_back({s, t, wd(gen)});
    SpikingNetwork net(roles, syn, SnnConfig{});
    Rng rng(trial);
    for (int k = 0; k < 30; ++k) {
      const std::vector<double> x{in(gen), in(gen)};
      const auto& r = net.step(x, rng);
      for (std::size_t i = 0; i < r.size(); ++i) {
        ASSERT_GE(r[i], 0.0);
        ASSERT_LE(r[i], 1.0);
        ASSERT_LE(net.states()[i].spike_count, net.config().rate_window);
      }
    }
  }
}

TEST(SpikingNetwork, StorageOrderDoesNotChangeRates) {
  // Inputs pinned at 0 or 1 so no randomness depends on neuron order.
  const std::vector<NeuronRole> roles{NeuronRole::input, NeuronRole::input, NeuronRole::output, NeuronRole::hidden,
                                      NeuronRole::hidden};
  const std::vector<Synapse> syn{{0, 3, 3.0}, {1, 4, -2.0}, {3, 4, 4.0}, {4, 3, 2.5},
                                 {3, 2, 5.0}, {4, 2, -3.0}, {2, 3, 1.5}, {2, 2, 1.0}};
  // New position of each original neuron (inputs keep their relative order).
  const std::vector<std::size_t> perm{1, 3, 4, 0, 2};
  std::vector<NeuronRole> roles_p(roles.size());
  for (std::size_t i = 0; i < roles.size(); ++i) roles_p[perm[i]] = roles[i];
  std::vector<Synapse> syn_p;
  for (const auto& s : syn) syn_p.push_back({perm[s.source], perm[s.target], s.weight});

  SpikingNetwork a(roles, syn, SnnConfig{});
  SpikingNetwork b(roles_p, syn_p, SnnConfig{});
  Rng ra(1), rb(2);
  const std::vector<double> x{1.0, 0.0};
  for (int k = 0; k < 40; ++k) {
    const auto ra_v = a.step(x, ra);
    const auto rb_v = b.step(x, rb);
    for (std::size_t i = 0; i < roles.size(); ++i) ASSERT_EQ(ra_v[i], rb_v[perm[i]]) << "step " << k << " neuron " << i;
  }
}

TEST(SpikingNetwork, SeededRunsAreIdentical) {
  const std::vector<NeuronRole> roles{NeuronRole::input, NeuronRole::input, NeuronRole::output, NeuronRole::hidden};
  const std::vector<Synapse> syn{{0, 3, 3.0}, {1, 2, 2.0}, {3, 2, 1.0}, {2, 3, -1.0}};
  SpikingNetwork a(roles, syn, SnnConfig{}), b(roles, syn, SnnConfig{});
  Rng ra(77), rb(77);
  const std::vector<double> x{0.3, 0.8};
  for (int k = 0; k < 50; ++k) ASSERT_EQ(a.step(x, ra), b.step(x, rb));
}

TEST(SpikingNetwork, TraceCsv) {
  SnnConfig cfg;
  cfg.record_trace = true;
  cfg.rate_window = 3;
  SpikingNetwork net({NeuronRole::input, NeuronRole::output}, {{0, 1, 1.0}}, cfg);
  Rng rng(1);
  const std::vector<double> x{1.0};
  net.step(x, rng);
  EXPECT_EQ(net.trace().size(), 6u);
  const auto csv = net.trace_csv();
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "tick,neuron_index,fired");
  EXPECT_NE(csv.find("\n0,0,1\n"), std::string::npos);
}
