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

#ifndef SPIKE_NEAT_EVOLUTION_HPP
#define SPIKE_NEAT_EVOLUTION_HPP

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <functional>
#include <optional>
#include <thread>
#include <vector>

#include "spike_neat/cartpole.hpp"
#include "spike_neat/config.hpp"
#include "spike_neat/phenotype.hpp"
#include "spike_neat/population.hpp"
#include "spike_neat/rng.hpp"

namespace spike_neat {

// Stream tags for derive_seed. Each consumer owns its own stream.
inline constexpr std::uint64_t kInitStream = 1;
inline constexpr std::uint64_t kBreedStream = 2;
inline constexpr std::uint64_t kEvalStream = 3;
inline constexpr std::uint64_t kReplayStream = 4;

struct EpisodeResult {
  long fitness = 0;
  bool success = false;
  std::vector<cartpole::TrajectoryRow> trajectory;
};

inline cartpole::State initial_state(const TaskConfig& cfg, Rng& rng) {
  cartpole::State s;
  if (cfg.markovian()) {
    const double f = 0.5 * cfg.initial_spread;
    s.x = uniform(rng, -f, f) * cfg.ranges.x;
    s.x_dot = uniform(rng, -f, f) * cfg.ranges.x_dot;
    s.theta = uniform(rng, -f, f) * cfg.ranges.theta;
    s.theta_dot = uniform(rng, -f, f) * cfg.ranges.theta_dot;
  } else {
    s.theta = cartpole::deg_to_rad(cfg.initial_theta_deg);
  }
  return s;
}

/// Runs one episode: observe -> network -> force -> plant step -> failure check,
/// until failure or `success_steps` survived steps.
inline EpisodeResult evaluate(const Genome& g, const TaskConfig& cfg, Rng& rng, bool record = false) {
  EpisodeResult r;
  Controller controller(g, cfg.codec);
  cartpole::State s = initial_state(cfg, rng);
  if (cartpole::failed(s, cfg.plant)) return r;
  if (record) r.trajectory.push_back({0, s.x, s.x_dot, s.theta, s.theta_dot, 0.0});
  while (r.fitness < cfg.success_steps) {
    const auto obs = cartpole::observe(s, cfg.markovian(), cfg.ranges);
    const double force = controller.act(obs, rng);
    s = cartpole::step(s, force, cfg.plant);
    if (record) r.trajectory.push_back({s.step, s.x, s.x_dot, s.theta, s.theta_dot, force});
    if (cartpole::failed(s, cfg.plant)) break;
    ++r.fitness;
  }
  r.success = r.fitness >= cfg.success_steps;
  return r;
}

/// Worker count from SPIKE_NEAT_THREADS (unset or 0 = hardware concurrency).
inline unsigned evaluation_threads() {
  unsigned n = 0;
  if (const char* env = std::getenv("SPIKE_NEAT_THREADS")) n = static_cast<unsigned>(std::strtoul(env, nullptr, 10));
  if (n == 0) n = std::max(1u, std::thread::hardware_concurrency());
  return n;
}

/// Applies `fn(i)` for i in [0, n) on up to `threads` workers.
inline void parallel_for(std::size_t n, unsigned threads, const std::function<void(std::size_t)>& fn) {
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, n));
  if (threads <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::jthread> pool;
  for (unsigned t = 0; t < threads; ++t)
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < n; i = next++) fn(i);
    });
}

/// Evaluates every genome; genome i of generation `gen` always draws from the
/// same random stream, so the result is independent of scheduling.
inline std::vector<EpisodeResult> evaluate_population(Population& pop, const TaskConfig& cfg, unsigned threads) {
  std::vector<EpisodeResult> results(pop.genomes.size());
  parallel_for(pop.genomes.size(), threads, [&](std::size_t i) {
    Rng rng = make_rng(cfg.seed, {kEvalStream, static_cast<std::uint64_t>(pop.generation), i});
    results[i] = evaluate(pop.genomes[i], cfg, rng);
  });
  for (std::size_t i = 0; i < results.size(); ++i) pop.genomes[i].fitness = static_cast<double>(results[i].fitness);
  return results;
}

struct RunResult {
  std::optional<int> generations;   // 1-based generation of first success
  std::vector<double> best_fitness;  // per-generation maximum raw fitness
  Genome champion;
  std::size_t species_count = 0;

  bool success() const { return generations.has_value(); }
};

using GenerationObserver = std::function<void(const Population&, double best)>;

inline RunResult run_evolution(const TaskConfig& cfg, const GenerationObserver& observer = {},
                               unsigned threads = evaluation_threads()) {
  Rng init_rng = make_rng(cfg.seed, {kInitStream});
  Rng breed_rng = make_rng(cfg.seed, {kBreedStream});
  Population pop = initial_population(cfg.n_inputs(), 1, cfg.phenotype, cfg.evolution, init_rng);

  RunResult out;
  for (int gen = 1; gen <= cfg.max_generations; ++gen) {
    const auto results = evaluate_population(pop, cfg, threads);
    speciate(pop, cfg.evolution.delta_t, cfg.evolution.coeffs, cfg.evolution.use_sigma, breed_rng);
    share_fitness(pop);

    const std::size_t champ = champion_index(pop.genomes);
    out.best_fitness.push_back(*pop.genomes[champ].fitness);
    out.champion = pop.genomes[champ];
    out.species_count = pop.species.size();
    if (observer) observer(pop, *pop.genomes[champ].fitness);
    if (results[champ].success) {
      out.generations = gen;
      return out;
    }
    if (gen < cfg.max_generations) reproduce(pop, breed_rng, cfg.evolution);
  }
  return out;
}

/// Replays a genome on the task's start state and records the trajectory.
inline EpisodeResult replay(const Genome& g, const TaskConfig& cfg, long steps) {
  TaskConfig c = cfg;
  c.success_steps = steps;
  Rng rng = make_rng(cfg.seed, {kReplayStream});
  return evaluate(g, c, rng, true);
}

}  // namespace spike_neat

#endif  // SPIKE_NEAT_EVOLUTION_HPP
