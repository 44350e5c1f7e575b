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

#ifndef SPIKE_NEAT_POPULATION_HPP
#define SPIKE_NEAT_POPULATION_HPP

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <vector>

#include "spike_neat/genome.hpp"
#include "spike_neat/rng.hpp"

namespace spike_neat {

struct Species {
  int id = 0;
  Genome representative;
  std::vector<std::size_t> members;  // indices into Population::genomes
  double best_fitness_ever = -std::numeric_limits<double>::infinity();
  int staleness = 0;
};

struct Population {
  std::vector<Genome> genomes;
  std::vector<Species> species;
  InnovationRegistry registry;
  int generation = 0;
  int next_species_id = 0;
  long next_genome_id = 0;
};

struct EvolutionParams {
  std::size_t population_size = 150;
  CompatibilityCoeffs coeffs;
  double delta_t = 3.0;
  bool use_sigma = false;
  MutationRates mutation;
  double crossover_prob = 0.75;
  int staleness_limit = 15;
  std::size_t elite_min_size = 5;  // champion copied when species size exceeds this
  double parent_fraction = 0.2;
};

inline Population initial_population(int n_inputs, int n_outputs, NodeKind kind, const EvolutionParams& params,
                                     Rng& rng) {
  Population pop;
  pop.genomes.reserve(params.population_size);
  for (std::size_t i = 0; i < params.population_size; ++i) {
    Genome g = minimal_genome(n_inputs, n_outputs, kind, rng, pop.registry, params.mutation.new_weight_range);
    g.id = pop.next_genome_id++;
    pop.genomes.push_back(std::move(g));
  }
  return pop;
}

/// Assigns every genome to the first species (in creation order) whose
/// representative is closer than delta_t, creating species as needed. Empty
/// species are dropped and the next generation's representatives are drawn
/// uniformly from the current members.
inline void speciate(Population& pop, double delta_t, const CompatibilityCoeffs& coeffs, bool use_sigma, Rng& rng) {
  for (auto& s : pop.species) s.members.clear();
  for (std::size_t i = 0; i < pop.genomes.size(); ++i) {
    const Genome& g = pop.genomes[i];
    auto home = std::find_if(pop.species.begin(), pop.species.end(), [&](const Species& s) {
      return compatibility(g, s.representative, coeffs, use_sigma) < delta_t;
    });
    if (home != pop.species.end()) {
      home->members.push_back(i);
    } else {
      Species s;
      s.id = pop.next_species_id++;
      s.representative = g;
      s.members.push_back(i);
      pop.species.push_back(std::move(s));
    }
  }
  std::erase_if(pop.species, [](const Species& s) { return s.members.empty(); });
  for (auto& s : pop.species) s.representative = pop.genomes[s.members[uniform_index(rng, s.members.size())]];
}

/// adjusted = raw / |species|.
inline void share_fitness(Population& pop) {
  for (const auto& s : pop.species) {
    for (auto idx : s.members) {
      auto& g = pop.genomes[idx];
      if (!g.fitness) throw std::invalid_argument("share_fitness: unevaluated genome");
      g.adjusted_fitness = *g.fitness / static_cast<double>(s.members.size());
    }
  }
}

/// Largest-remainder apportionment of `seats` in proportion to `weights`.
/// Equal remainders favour the smaller floor share, then the lower index.
inline std::vector<std::size_t> apportion(const std::vector<double>& weights, std::size_t seats) {
  std::vector<std::size_t> out(weights.size(), 0);
  const double total = std::accumulate(weights.begin(), weights.end(), 0.0);
  if (weights.empty() || !(total > 0.0)) return out;
  std::vector<double> remainder(weights.size());
  std::size_t given = 0;
  for (std::size_t i = 0; i < weights.size(); ++i) {
    const double share = static_cast<double>(seats) * weights[i] / total;
    out[i] = static_cast<std::size_t>(std::floor(share));
    remainder[i] = share - std::floor(share);
    given += out[i];
  }
  std::vector<std::size_t> order(weights.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (remainder[a] != remainder[b]) return remainder[a] > remainder[b];
    return out[a] < out[b];
  });
  for (std::size_t k = 0; given < seats; k = (k + 1) % order.size(), ++given) ++out[order[k]];
  return out;
}

/// Index of the highest raw fitness; the lowest index wins ties.
inline std::size_t champion_index(const std::vector<Genome>& genomes) {
  std::size_t best = 0;
  for (std::size_t i = 1; i < genomes.size(); ++i)
    if (genomes[i].fitness.value_or(-1.0) > genomes[best].fitness.value_or(-1.0)) best = i;
  return best;
}

struct SpeciesReport {
  int species_id;
  std::size_t size;
  std::size_t quota;
  bool elite_copied;
  std::size_t elite_offspring_index;  // valid when elite_copied
};

/// Refreshes best-ever fitness and staleness for every species.
inline void update_staleness(Population& pop) {
  for (auto& s : pop.species) {
    double best = -std::numeric_limits<double>::infinity();
    for (auto idx : s.members) best = std::max(best, pop.genomes[idx].fitness.value_or(0.0));
    if (best > s.best_fitness_ever) {
      s.best_fitness_ever = best;
      s.staleness = 0;
    } else {
      ++s.staleness;
    }
  }
}

inline std::vector<std::size_t> offspring_quotas(const Population& pop, const EvolutionParams& params) {
  const std::size_t champ = champion_index(pop.genomes);
  std::vector<double> weights;
  std::vector<double> sizes;
  for (const auto& s : pop.species) {
    const bool has_champ = std::find(s.members.begin(), s.members.end(), champ) != s.members.end();
    const bool eligible = s.staleness < params.staleness_limit || has_champ;
    double total = 0.0;
    for (auto idx : s.members) total += pop.genomes[idx].adjusted_fitness;
    weights.push_back(eligible ? total : 0.0);
    sizes.push_back(eligible ? static_cast<double>(s.members.size()) : 0.0);
  }
  if (std::accumulate(weights.begin(), weights.end(), 0.0) > 0.0) return apportion(weights, params.population_size);
  return apportion(sizes, params.population_size);
}

/// Produces the next generation in place: (mu, lambda) replacement with
/// per-species champion elitism. Expects fitness shared and speciation current.
inline std::vector<SpeciesReport> reproduce(Population& pop, Rng& rng, const EvolutionParams& params) {
  if (pop.genomes.empty() || pop.species.empty()) throw std::invalid_argument("reproduce: empty population");
  update_staleness(pop);
  const auto quotas = offspring_quotas(pop, params);

  std::vector<Genome> next;
  next.reserve(params.population_size);
  std::vector<SpeciesReport> report;

  for (std::size_t si = 0; si < pop.species.size(); ++si) {
    const auto& s = pop.species[si];
    SpeciesReport rep{s.id, s.members.size(), quotas[si], false, 0};
    std::vector<std::size_t> ranked = s.members;
    std::stable_sort(ranked.begin(), ranked.end(), [&](std::size_t a, std::size_t b) {
      return pop.genomes[a].fitness.value_or(0.0) > pop.genomes[b].fitness.value_or(0.0);
    });
    std::size_t remaining = quotas[si];
    if (remaining > 0 && ranked.size() > params.elite_min_size) {
      Genome elite = pop.genomes[ranked.front()];
      elite.id = pop.next_genome_id++;
      elite.fitness.reset();
      elite.adjusted_fitness = 0.0;
      rep.elite_copied = true;
      rep.elite_offspring_index = next.size();
      next.push_back(std::move(elite));
      --remaining;
    }
    const auto n_parents = std::max<std::size_t>(
        1, static_cast<std::size_t>(std::ceil(params.parent_fraction * static_cast<double>(ranked.size()) - 1e-9)));
    for (; remaining > 0; --remaining) {
      const Genome& pa = pop.genomes[ranked[uniform_index(rng, n_parents)]];
      Genome child;
      if (bernoulli(rng, params.crossover_prob)) {
        const Genome& pb = pop.genomes[ranked[uniform_index(rng, n_parents)]];
        child = crossover(pa, pb, rng);
      } else {
        child = pa;
      }
      mutate(child, rng, params.mutation, pop.registry);
      child.id = pop.next_genome_id++;
      child.fitness.reset();
      child.adjusted_fitness = 0.0;
      next.push_back(std::move(child));
    }
    report.push_back(rep);
  }

  pop.genomes = std::move(next);
  for (auto& s : pop.species) s.members.clear();
  ++pop.generation;
  return report;
}

}  // namespace spike_neat

#endif  // SPIKE_NEAT_POPULATION_HPP
