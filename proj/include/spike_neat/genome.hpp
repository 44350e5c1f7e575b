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

#ifndef SPIKE_NEAT_GENOME_HPP
#define SPIKE_NEAT_GENOME_HPP

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "spike_neat/rng.hpp"
#include "spike_neat/snn.hpp"

namespace spike_neat {

enum class NodeKind { spiking, sigmoid };

struct NodeGene {
  int id;
  NeuronRole role;
  NodeKind kind;

  friend bool operator==(const NodeGene&, const NodeGene&) = default;
};

struct ConnectionGene {
  long innovation;
  int source;
  int target;
  double weight;
  bool enabled = true;

  friend bool operator==(const ConnectionGene&, const ConnectionGene&) = default;
};

struct Genome {
  long id = 0;
  std::vector<NodeGene> nodes;
  std::vector<ConnectionGene> connections;  // ascending innovation
  double sigma = 1.0;                        // continuous-decoder gain, spiking genomes only
  std::optional<double> fitness;
  double adjusted_fitness = 0.0;

  NodeKind kind() const { return nodes.empty() ? NodeKind::spiking : nodes.front().kind; }

  const NodeGene* find_node(int node_id) const {
    for (const auto& n : nodes)
      if (n.id == node_id) return &n;
    return nullptr;
  }

  bool has_connection(int source, int target) const {
    return std::any_of(connections.begin(), connections.end(),
                       [&](const ConnectionGene& c) { return c.source == source && c.target == target; });
  }

  std::size_t hidden_count() const {
    return static_cast<std::size_t>(
        std::count_if(nodes.begin(), nodes.end(), [](const NodeGene& n) { return n.role == NeuronRole::hidden; }));
  }

  void sort_connections() {
    std::sort(connections.begin(), connections.end(),
              [](const ConnectionGene& a, const ConnectionGene& b) { return a.innovation < b.innovation; });
  }

  /// Structural equality (ignores bookkeeping such as adjusted fitness).
  bool same_structure(const Genome& o) const { return nodes == o.nodes && connections == o.connections && sigma == o.sigma; }
};

/// Throws std::invalid_argument describing the first violated invariant.
inline void check_well_formed(const Genome& g) {
  std::set<int> ids;
  for (const auto& n : g.nodes)
    if (!ids.insert(n.id).second) throw std::invalid_argument("genome: duplicate node id " + std::to_string(n.id));
  for (std::size_t i = 0; i < g.connections.size(); ++i) {
    const auto& c = g.connections[i];
    if (i > 0 && g.connections[i - 1].innovation >= c.innovation)
      throw std::invalid_argument("genome: connections not strictly ascending by innovation");
    if (!ids.count(c.source) || !ids.count(c.target))
      throw std::invalid_argument("genome: connection " + std::to_string(c.innovation) + " references a missing node");
    if (g.find_node(c.target)->role == NeuronRole::input)
      throw std::invalid_argument("genome: connection into an input node");
    if (!std::isfinite(c.weight)) throw std::invalid_argument("genome: non-finite weight");
  }
  if (!(g.sigma > 0.0)) throw std::invalid_argument("genome: sigma must be positive");
}

/// Global historical markings for one evolutionary run.
class InnovationRegistry {
 public:
  /// Innovation number of the (source, target) structural gene, allocating on first sight.
  long connection(int source, int target) {
    auto [it, inserted] = connections_.try_emplace({source, target}, next_innovation_);
    if (inserted) ++next_innovation_;
    return it->second;
  }

  /// Node id for splitting the gene with `innovation`. The same split reuses
  /// the same id unless `g` already contains it.
  int split_node(long innovation, const Genome& g) {
    auto it = splits_.find(innovation);
    if (it != splits_.end() && g.find_node(it->second) == nullptr) return it->second;
    const int id = allocate_node();
    splits_[innovation] = id;
    return id;
  }

  int allocate_node() { return next_node_++; }
  void reserve_nodes(int first_free) { next_node_ = std::max(next_node_, first_free); }

  std::optional<long> lookup(int source, int target) const {
    auto it = connections_.find({source, target});
    if (it == connections_.end()) return std::nullopt;
    return it->second;
  }
  std::size_t size() const { return connections_.size(); }

 private:
  std::map<std::pair<int, int>, long> connections_;
  std::map<long, int> splits_;
  long next_innovation_ = 0;
  int next_node_ = 0;
};

/// Fully connected input->output genome. Input ids are 0..n_inputs-1, output
/// ids follow. Weights are uniform in [-init_range, init_range].
inline Genome minimal_genome(int n_inputs, int n_outputs, NodeKind kind, Rng& rng, InnovationRegistry& registry,
                             double init_range = 1.0) {
  if (n_inputs < 1 || n_outputs < 1) throw std::invalid_argument("minimal_genome: need >= 1 input and output");
  Genome g;
  for (int i = 0; i < n_inputs; ++i) g.nodes.push_back({i, NeuronRole::input, kind});
  for (int o = 0; o < n_outputs; ++o) g.nodes.push_back({n_inputs + o, NeuronRole::output, kind});
  registry.reserve_nodes(n_inputs + n_outputs);
  for (int o = 0; o < n_outputs; ++o)
    for (int i = 0; i < n_inputs; ++i)
      g.connections.push_back({registry.connection(i, n_inputs + o), i, n_inputs + o,
                               uniform(rng, -init_range, init_range), true});
  g.sort_connections();
  g.sigma = 1.0;
  return g;
}

inline Genome minimal_genome(int n_inputs, int n_outputs, NodeKind kind, Rng& rng) {
  InnovationRegistry registry;
  return minimal_genome(n_inputs, n_outputs, kind, rng, registry);
}

struct CompatibilityCoeffs {
  double c1 = 1.0;  // excess
  double c2 = 1.0;  // disjoint
  double c3 = 0.4;  // mean weight difference
  double c4 = 1.0;  // sigma difference
};

struct GeneAlignment {
  std::size_t excess = 0;
  std::size_t disjoint = 0;
  std::size_t matching = 0;
  double weight_diff_sum = 0.0;
};

/// Merge of two innovation-sorted gene lists.
inline GeneAlignment align(const Genome& a, const Genome& b) {
  GeneAlignment r;
  const auto& ga = a.connections;
  const auto& gb = b.connections;
  const long max_a = ga.empty() ? -1 : ga.back().innovation;
  const long max_b = gb.empty() ? -1 : gb.back().innovation;
  std::size_t i = 0, j = 0;
  while (i < ga.size() || j < gb.size()) {
    if (i < ga.size() && j < gb.size() && ga[i].innovation == gb[j].innovation) {
      ++r.matching;
      r.weight_diff_sum += std::abs(ga[i].weight - gb[j].weight);
      ++i;
      ++j;
    } else if (j >= gb.size() || (i < ga.size() && ga[i].innovation < gb[j].innovation)) {
      (ga[i].innovation > max_b ? r.excess : r.disjoint) += 1;
      ++i;
    } else {
      (gb[j].innovation > max_a ? r.excess : r.disjoint) += 1;
      ++j;
    }
  }
  return r;
}

/// delta = c1 E/N + c2 D/N + c3 mean|dw| (+ c4 |sigma_a - sigma_b|), N = larger gene count.
inline double compatibility(const Genome& a, const Genome& b, const CompatibilityCoeffs& k, bool use_sigma) {
  const auto al = align(a, b);
  const double n = static_cast<double>(std::max(a.connections.size(), b.connections.size()));
  double delta = 0.0;
  if (n > 0.0) delta += (k.c1 * al.excess + k.c2 * al.disjoint) / n;
  if (al.matching > 0) delta += k.c3 * al.weight_diff_sum / al.matching;
  if (use_sigma) delta += k.c4 * std::abs(a.sigma - b.sigma);
  return delta;
}

/// NEAT crossover. Matching genes come from either parent at random;
/// disjoint/excess genes from the fitter parent (coin flip per gene on ties).
inline Genome crossover(const Genome& a, const Genome& b, Rng& rng, double p_keep_disabled = 0.75) {
  if (!a.fitness || !b.fitness) throw std::invalid_argument("crossover: parents must be evaluated");
  const bool tie = *a.fitness == *b.fitness;
  const bool a_fitter = *a.fitness > *b.fitness;

  Genome child;
  child.sigma = tie ? 0.5 * (a.sigma + b.sigma) : (a_fitter ? a.sigma : b.sigma);

  auto inherit = [&](const ConnectionGene& chosen, bool disabled_in_either) {
    ConnectionGene c = chosen;
    c.enabled = disabled_in_either ? !bernoulli(rng, p_keep_disabled) : true;
    child.connections.push_back(c);
  };

  const auto& ga = a.connections;
  const auto& gb = b.connections;
  std::size_t i = 0, j = 0;
  while (i < ga.size() || j < gb.size()) {
    if (i < ga.size() && j < gb.size() && ga[i].innovation == gb[j].innovation) {
      const auto& pick = bernoulli(rng, 0.5) ? ga[i] : gb[j];
      inherit(pick, !ga[i].enabled || !gb[j].enabled);
      ++i;
      ++j;
    } else if (j >= gb.size() || (i < ga.size() && ga[i].innovation < gb[j].innovation)) {
      if (tie ? bernoulli(rng, 0.5) : a_fitter) inherit(ga[i], !ga[i].enabled);
      ++i;
    } else {
      if (tie ? bernoulli(rng, 0.5) : !a_fitter) inherit(gb[j], !gb[j].enabled);
      ++j;
    }
  }

  // Inputs/outputs always; hidden nodes only when referenced.
  std::set<int> referenced;
  for (const auto& c : child.connections) {
    referenced.insert(c.source);
    referenced.insert(c.target);
  }
  std::set<int> added;
  for (const Genome* parent : {&a, &b}) {
    for (const auto& n : parent->nodes) {
      if ((n.role != NeuronRole::hidden || referenced.count(n.id)) && added.insert(n.id).second)
        child.nodes.push_back(n);
    }
  }
  std::stable_sort(child.nodes.begin(), child.nodes.end(), [](const NodeGene& x, const NodeGene& y) {
    const auto rank = [](NeuronRole r) { return r == NeuronRole::input ? 0 : r == NeuronRole::output ? 1 : 2; };
    return rank(x.role) != rank(y.role) ? rank(x.role) < rank(y.role) : x.id < y.id;
  });
  return child;
}

struct MutationRates {
  double add_node = 0.03;
  double add_connection = 0.1;
  double weight = 0.8;           // per genome
  double weight_perturb = 0.5;   // uniform +/- step
  double weight_replace = 0.1;   // per gene, given weight mutation
  double weight_limit = 8.0;
  double new_weight_range = 1.0;
  double sigma = 0.2;
  double sigma_step = 0.2;       // log-space step
  double sigma_min = 0.05;
  double sigma_max = 20.0;

  static MutationRates none() { return {0.0, 0.0, 0.0, 0.5, 0.1, 8.0, 1.0, 0.0, 0.2, 0.05, 20.0}; }
};

/// Which structural operators fired; useful for statistics and tests.
struct MutationLog {
  bool added_node = false;
  bool added_connection = false;
  bool perturbed_weights = false;
  bool perturbed_sigma = false;
};

/// Splits an enabled connection: source -> new (w = 1), new -> target (w = old).
inline bool add_node(Genome& g, Rng& rng, InnovationRegistry& registry) {
  std::vector<std::size_t> enabled;
  for (std::size_t i = 0; i < g.connections.size(); ++i)
    if (g.connections[i].enabled) enabled.push_back(i);
  if (enabled.empty()) return false;
  auto& old = g.connections[enabled[uniform_index(rng, enabled.size())]];
  old.enabled = false;
  const ConnectionGene split = old;
  const int node = registry.split_node(split.innovation, g);
  g.nodes.push_back({node, NeuronRole::hidden, g.kind()});
  g.connections.push_back({registry.connection(split.source, node), split.source, node, 1.0, true});
  g.connections.push_back({registry.connection(node, split.target), node, split.target, split.weight, true});
  g.sort_connections();
  return true;
}

/// Adds a previously absent directed edge. Self-loops and back edges allowed;
/// inputs are never targets.
inline bool add_connection(Genome& g, Rng& rng, InnovationRegistry& registry, double weight_range) {
  std::vector<std::pair<int, int>> candidates;
  for (const auto& src : g.nodes)
    for (const auto& dst : g.nodes)
      if (dst.role != NeuronRole::input && !g.has_connection(src.id, dst.id)) candidates.emplace_back(src.id, dst.id);
  if (candidates.empty()) return false;
  const auto [s, t] = candidates[uniform_index(rng, candidates.size())];
  g.connections.push_back({registry.connection(s, t), s, t, uniform(rng, -weight_range, weight_range), true});
  g.sort_connections();
  return true;
}

inline MutationLog mutate(Genome& g, Rng& rng, const MutationRates& rates, InnovationRegistry& registry) {
  MutationLog log;
  if (bernoulli(rng, rates.add_node)) log.added_node = add_node(g, rng, registry);
  if (bernoulli(rng, rates.add_connection)) log.added_connection = add_connection(g, rng, registry, rates.new_weight_range);
  if (bernoulli(rng, rates.weight)) {
    log.perturbed_weights = true;
    for (auto& c : g.connections) {
      if (bernoulli(rng, rates.weight_replace))
        c.weight = uniform(rng, -rates.weight_limit, rates.weight_limit);
      else
        c.weight = std::clamp(c.weight + uniform(rng, -rates.weight_perturb, rates.weight_perturb),
                              -rates.weight_limit, rates.weight_limit);
    }
  }
  if (g.kind() == NodeKind::spiking && bernoulli(rng, rates.sigma)) {
    log.perturbed_sigma = true;
    g.sigma = std::clamp(g.sigma * std::exp(uniform(rng, -rates.sigma_step, rates.sigma_step)), rates.sigma_min,
                         rates.sigma_max);
  }
  return log;
}

// ---------------------------------------------------------------------------
// Text serialisation

inline const char* to_string(NeuronRole r) {
  switch (r) {
    case NeuronRole::input: return "input";
    case NeuronRole::hidden: return "hidden";
    case NeuronRole::output: return "output";
  }
  return "?";
}

inline const char* to_string(NodeKind k) { return k == NodeKind::spiking ? "spiking" : "sigmoid"; }

inline std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

inline std::string serialize(const Genome& g) {
  std::string out = "genome " + std::to_string(g.id) + " sigma " + format_double(g.sigma) + " fitness " +
                    (g.fitness ? format_double(*g.fitness) : std::string("none")) + "\n";
  for (const auto& n : g.nodes)
    out += "node " + std::to_string(n.id) + " " + to_string(n.role) + " " + to_string(n.kind) + "\n";
  for (const auto& c : g.connections)
    out += "conn " + std::to_string(c.innovation) + " " + std::to_string(c.source) + " " + std::to_string(c.target) +
           " " + format_double(c.weight) + " " + (c.enabled ? "1" : "0") + "\n";
  return out;
}

namespace detail {

inline double parse_double(const std::string& tok, int line_no) {
  std::size_t pos = 0;
  double v = 0.0;
  try {
    v = std::stod(tok, &pos);
  } catch (const std::exception&) {
    pos = 0;
  }
  if (pos != tok.size()) throw std::invalid_argument("genome line " + std::to_string(line_no) + ": bad number '" + tok + "'");
  return v;
}

inline long parse_long(const std::string& tok, int line_no) {
  std::size_t pos = 0;
  long v = 0;
  try {
    v = std::stol(tok, &pos);
  } catch (const std::exception&) {
    pos = 0;
  }
  if (pos != tok.size()) throw std::invalid_argument("genome line " + std::to_string(line_no) + ": bad integer '" + tok + "'");
  return v;
}

}  // namespace detail

/// Parses any number of concatenated genome records.
inline std::vector<Genome> parse_genomes(const std::string& text) {
  std::vector<Genome> out;
  std::istringstream in(text);
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::istringstream ls(line);
    std::vector<std::string> tok;
    for (std::string t; ls >> t;) tok.push_back(t);
    if (tok.empty() || tok[0][0] == '#') continue;
    const auto bad = [&](const char* what) {
      return std::invalid_argument("genome line " + std::to_string(line_no) + ": " + what);
    };
    if (tok[0] == "genome") {
      if (tok.size() != 6 || tok[2] != "sigma" || tok[4] != "fitness") throw bad("malformed header");
      Genome g;
      g.id = detail::parse_long(tok[1], line_no);
      g.sigma = detail::parse_double(tok[3], line_no);
      if (tok[5] != "none") g.fitness = detail::parse_double(tok[5], line_no);
      out.push_back(std::move(g));
    } else if (tok[0] == "node") {
      if (out.empty()) throw bad("node before genome header");
      if (tok.size() != 4) throw bad("malformed node");
      NodeGene n{static_cast<int>(detail::parse_long(tok[1], line_no)), NeuronRole::input, NodeKind::spiking};
      if (tok[2] == "input") n.role = NeuronRole::input;
      else if (tok[2] == "hidden") n.role = NeuronRole::hidden;
      else if (tok[2] == "output") n.role = NeuronRole::output;
      else throw bad("unknown node role");
      if (tok[3] == "spiking") n.kind = NodeKind::spiking;
      else if (tok[3] == "sigmoid") n.kind = NodeKind::sigmoid;
      else throw bad("unknown node kind");
      out.back().nodes.push_back(n);
    } else if (tok[0] == "conn") {
      if (out.empty()) throw bad("conn before genome header");
      if (tok.size() != 6 || (tok[5] != "0" && tok[5] != "1")) throw bad("malformed conn");
      out.back().connections.push_back({detail::parse_long(tok[1], line_no),
                                        static_cast<int>(detail::parse_long(tok[2], line_no)),
                                        static_cast<int>(detail::parse_long(tok[3], line_no)),
                                        detail::parse_double(tok[4], line_no), tok[5] == "1"});
    } else {
      throw bad("unknown record type");
    }
  }
  for (const auto& g : out) check_well_formed(g);
  return out;
}

inline Genome parse_genome(const std::string& text) {
  auto all = parse_genomes(text);
  if (all.size() != 1) throw std::invalid_argument("parse_genome: expected exactly one genome");
  return std::move(all.front());
}

}  // namespace spike_neat

#endif  // SPIKE_NEAT_GENOME_HPP
