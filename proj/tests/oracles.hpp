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

// Independent reference implementations used only by the test suites.
// Nothing here calls into the code paths it is used to check.

#ifndef SPIKE_NEAT_TESTS_ORACLES_HPP
#define SPIKE_NEAT_TESTS_ORACLES_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <map>
#include <set>
#include <vector>

namespace oracle {

/// Plain Euler on the Izhikevich ODEs at step `h_ms`, reset on v >= v_t.
/// Returns the spike count over `duration_ms`.
inline int izhikevich_spikes(double a, double b, double c, double d, double v_t, double current, double duration_ms,
                             double h_ms = 0.001, double* final_v = nullptr) {
  double v = c;
  double u = b * c;
  int spikes = 0;
  const long n = std::lround(duration_ms / h_ms);
  for (long k = 0; k < n; ++k) {
    const double dv = 0.04 * v * v + 5.0 * v + 140.0 - u + current;
    const double du = a * (b * v - u);
    v += h_ms * dv;
    u += h_ms * du;
    if (v >= v_t) {
      v = c;
      u += d;
      ++spikes;
    }
  }
  if (final_v) *final_v = v;
  return spikes;
}

struct PlantState {
  double x, x_dot, theta, theta_dot;
};

/// Four-line Euler update of the frictionless cart-pole, written out from the
/// equations of motion independently of the library.
inline PlantState euler_step(const PlantState& s, double force, double tau) {
  const double g = 9.8, mc = 1.0, mp = 0.1, l = 0.5;
  const double total = mc + mp;
  const double st = std::sin(s.theta), ct = std::cos(s.theta);
  const double num = g * st + ct * ((-force - mp * l * s.theta_dot * s.theta_dot * st) / total);
  const double den = l * (4.0 / 3.0 - mp * ct * ct / total);
  const double theta_acc = num / den;
  const double x_acc = (force + mp * l * (s.theta_dot * s.theta_dot * st - theta_acc * ct)) / total;
  PlantState n;
  n.x = s.x + tau * s.x_dot;
  n.x_dot = s.x_dot + tau * x_acc;
  n.theta = s.theta + tau * s.theta_dot;
  n.theta_dot = s.theta_dot + tau * theta_acc;
  return n;
}

struct Gene {
  long innovation;
  double weight;
};

struct Alignment {
  int excess = 0, disjoint = 0, matching = 0;
  double mean_weight_diff = 0.0;
};

/// Brute-force classification: look every innovation up in both genomes.
inline Alignment brute_align(const std::vector<Gene>& a, const std::vector<Gene>& b) {
  std::map<long, double> ma, mb;
  for (const auto& g : a) ma[g.innovation] = g.weight;
  for (const auto& g : b) mb[g.innovation] = g.weight;
  const long max_a = ma.empty() ? -1 : ma.rbegin()->first;
  const long max_b = mb.empty() ? -1 : mb.rbegin()->first;
  std::set<long> all;
  for (const auto& [k, w] : ma) all.insert(k);
  for (const auto& [k, w] : mb) all.insert(k);
  Alignment r;
  double sum = 0.0;
  for (long k : all) {
    const bool in_a = ma.count(k), in_b = mb.count(k);
    if (in_a && in_b) {
      ++r.matching;
      sum += std::abs(ma[k] - mb[k]);
    } else if (in_a) {
      (k > max_b ? r.excess : r.disjoint)++;
    } else {
      (k > max_a ? r.excess : r.disjoint)++;
    }
  }
  r.mean_weight_diff = r.matching ? sum / r.matching : 0.0;
  return r;
}

inline double brute_compatibility(const std::vector<Gene>& a, const std::vector<Gene>& b, double c1, double c2, double c3,
                                  double c4, double sigma_a, double sigma_b, bool use_sigma) {
  const auto al = brute_align(a, b);
  const double n = static_cast<double>(std::max(a.size(), b.size()));
  double d = n > 0 ? (c1 * al.excess + c2 * al.disjoint) / n : 0.0;
  d += c3 * al.mean_weight_diff;
  if (use_sigma) d += c4 * std::abs(sigma_a - sigma_b);
  return d;
}

/// Pairwise-count definition of the Mann-Whitney statistic for sample a.
inline double brute_u(const std::vector<double>& a, const std::vector<double>& b, bool a_greater) {
  double u = 0.0;
  for (double x : a)
    for (double y : b) {
      if (x == y)
        u += 0.5;
      else if ((x > y) == a_greater)
        u += 1.0;
    }
  return u;
}

/// Exact two-sided permutation p-value of U by enumerating every split of the
/// pooled sample (feasible for small n).
inline double brute_exact_p(const std::vector<double>& a, const std::vector<double>& b) {
  std::vector<double> pooled(a);
  pooled.insert(pooled.end(), b.begin(), b.end());
  const std::size_t n = pooled.size(), n1 = a.size();
  const double mu = 0.5 * static_cast<double>(a.size() * b.size());
  const double obs = std::abs(brute_u(a, b, true) - mu);
  double total = 0, extreme = 0;
  for (unsigned mask = 0; mask < (1u << n); ++mask) {
    if (static_cast<std::size_t>(__builtin_popcount(mask)) != n1) continue;
    std::vector<double> x, y;
    for (std::size_t i = 0; i < n; ++i) ((mask >> i) & 1 ? x : y).push_back(pooled[i]);
    total += 1;
    if (std::abs(brute_u(x, y, true) - mu) >= obs - 1e-9) extreme += 1;
  }
  return extreme / total;
}

/// Hamilton (largest remainder) apportionment, remainders compared exactly,
/// ties to the smaller floor then the earlier entry.
inline std::vector<long> hamilton(const std::vector<double>& w, long seats) {
  double total = 0;
  for (double x : w) total += x;
  std::vector<long> q(w.size());
  std::vector<std::pair<double, std::size_t>> rem;
  long given = 0;
  for (std::size_t i = 0; i < w.size(); ++i) {
    const double exact = seats * w[i] / total;
    q[i] = static_cast<long>(std::floor(exact));
    given += q[i];
    rem.push_back({exact - q[i], i});
  }
  std::sort(rem.begin(), rem.end(), [&](auto x, auto y) {
    if (x.first != y.first) return x.first > y.first;
    if (q[x.second] != q[y.second]) return q[x.second] < q[y.second];
    return x.second < y.second;
  });
  for (std::size_t k = 0; given < seats; ++k, ++given) ++q[rem[k % rem.size()].second];
  return q;
}

}  // namespace oracle

#endif  // SPIKE_NEAT_TESTS_ORACLES_HPP
