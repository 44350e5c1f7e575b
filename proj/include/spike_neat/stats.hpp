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

#ifndef SPIKE_NEAT_STATS_HPP
#define SPIKE_NEAT_STATS_HPP

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

namespace spike_neat {

inline double median(std::vector<double> v) {
  if (v.empty()) throw std::invalid_argument("median: empty sample");
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

inline double mean(std::span<const double> v) {
  if (v.empty()) throw std::invalid_argument("mean: empty sample");
  return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

/// Campaign summary. Best/worst range over successful runs only; median and
/// mean count every failed run as `failure_value` generations.
struct RunSummary {
  std::optional<int> best;
  std::optional<int> worst;
  double median = 0.0;
  double mean = 0.0;
  std::size_t failures = 0;
  std::size_t runs = 0;

  double failure_rate() const { return runs ? static_cast<double>(failures) / static_cast<double>(runs) : 0.0; }
};

inline RunSummary summarize(std::span<const std::optional<int>> outcomes, int failure_value) {
  if (outcomes.empty()) throw std::invalid_argument("summarize: no runs");
  RunSummary s;
  s.runs = outcomes.size();
  std::vector<double> values;
  for (const auto& o : outcomes) {
    if (o) {
      s.best = s.best ? std::min(*s.best, *o) : *o;
      s.worst = s.worst ? std::max(*s.worst, *o) : *o;
      values.push_back(*o);
    } else {
      ++s.failures;
      values.push_back(failure_value);
    }
  }
  s.median = median(values);
  s.mean = mean(values);
  return s;
}

struct MannWhitneyResult {
  double u_a;  // pairs with a_i > b_j, ties counted 1/2
  double u_b;  // pairs with a_i < b_j, ties counted 1/2
  double p;    // two-sided
  bool exact;
};

namespace detail {

/// Mid-ranks of the pooled sample (1-based).
inline std::vector<double> mid_ranks(const std::vector<double>& pooled) {
  std::vector<std::size_t> order(pooled.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) { return pooled[x] < pooled[y]; });
  std::vector<double> ranks(pooled.size());
  for (std::size_t i = 0; i < order.size();) {
    std::size_t j = i;
    while (j + 1 < order.size() && pooled[order[j + 1]] == pooled[order[i]]) ++j;
    const double r = 0.5 * static_cast<double>(i + j) + 1.0;
    for (std::size_t k = i; k <= j; ++k) ranks[order[k]] = r;
    i = j + 1;
  }
  return ranks;
}

inline double normal_sf(double z) { return 0.5 * std::erfc(z / std::sqrt(2.0)); }

}  // namespace detail

/// Threshold (both samples at most this size) for exact permutation p-values.
inline constexpr std::size_t kExactMannWhitneyLimit = 10;

/// Mann-Whitney U test with mid-rank ties.
///
/// Small samples use the exact permutation distribution of the rank sum
/// (tie-aware); larger ones a normal approximation with tie-corrected variance
/// and continuity correction.
inline MannWhitneyResult mann_whitney_u(std::span<const double> a, std::span<const double> b) {
  if (a.size() < 2 || b.size() < 2) throw std::invalid_argument("mann_whitney_u: each sample needs >= 2 values");
  const std::size_t n1 = a.size();
  const std::size_t n2 = b.size();
  const std::size_t n = n1 + n2;
  std::vector<double> pooled(a.begin(), a.end());
  pooled.insert(pooled.end(), b.begin(), b.end());
  const auto ranks = detail::mid_ranks(pooled);

  const double r1 = std::accumulate(ranks.begin(), ranks.begin() + static_cast<long>(n1), 0.0);
  MannWhitneyResult res{};
  res.u_a = r1 - static_cast<double>(n1 * (n1 + 1)) / 2.0;
  res.u_b = static_cast<double>(n1 * n2) - res.u_a;
  const double mu = static_cast<double>(n1 * n2) / 2.0;

  if (n1 <= kExactMannWhitneyLimit && n2 <= kExactMannWhitneyLimit) {
    // Doubled mid-ranks are integers, so rank sums can be counted exactly.
    std::vector<long> r2(n);
    for (std::size_t i = 0; i < n; ++i) r2[i] = std::lround(2.0 * ranks[i]);
    // ways[k][s]: subsets of size k with doubled rank sum s
    std::vector<std::map<long, double>> ways(n1 + 1);
    ways[0][0] = 1.0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t k = std::min(i + 1, n1); k >= 1; --k)
        for (const auto& [s, w] : ways[k - 1]) ways[k][s + r2[i]] += w;
    const double centre2 = static_cast<double>(n1 * (n + 1));  // 2 E[R1]
    const double obs_dev = std::abs(2.0 * r1 - centre2);
    double total = 0.0;
    double extreme = 0.0;
    for (const auto& [s, w] : ways[n1]) {
      total += w;
      if (std::abs(static_cast<double>(s) - centre2) >= obs_dev - 1e-9) extreme += w;
    }
    res.p = std::min(1.0, extreme / total);
    res.exact = true;
    return res;
  }

  std::map<double, std::size_t> ties;
  for (double v : pooled) ++ties[v];
  double tie_term = 0.0;
  for (const auto& [v, t] : ties) tie_term += static_cast<double>(t * t * t - t);
  const double nn = static_cast<double>(n);
  const double var = static_cast<double>(n1 * n2) / 12.0 * ((nn + 1.0) - tie_term / (nn * (nn - 1.0)));
  if (var <= 0.0) {
    res.p = 1.0;
  } else {
    const double z = std::max(0.0, std::abs(res.u_a - mu) - 0.5) / std::sqrt(var);
    res.p = std::min(1.0, 2.0 * detail::normal_sf(z));
  }
  res.exact = false;
  return res;
}

struct ProgressSeries {
  std::vector<double> mean;
  std::vector<double> sd;  // sample standard deviation, 0 for a single run
};

/// Element-wise mean and sample SD across runs. Shorter series (runs that
/// stopped on success) are padded with their last value.
inline ProgressSeries fitness_progress(const std::vector<std::vector<double>>& runs) {
  if (runs.empty()) throw std::invalid_argument("fitness_progress: no runs");
  std::size_t len = 0;
  for (const auto& r : runs) {
    if (r.empty()) throw std::invalid_argument("fitness_progress: empty series");
    len = std::max(len, r.size());
  }
  ProgressSeries out;
  out.mean.resize(len);
  out.sd.resize(len);
  const double k = static_cast<double>(runs.size());
  for (std::size_t t = 0; t < len; ++t) {
    double sum = 0.0;
    for (const auto& r : runs) sum += t < r.size() ? r[t] : r.back();
    const double m = sum / k;
    double ss = 0.0;
    for (const auto& r : runs) {
      const double d = (t < r.size() ? r[t] : r.back()) - m;
      ss += d * d;
    }
    out.mean[t] = m;
    out.sd[t] = runs.size() > 1 ? std::sqrt(ss / (k - 1.0)) : 0.0;
  }
  return out;
}

}  // namespace spike_neat

#endif  // SPIKE_NEAT_STATS_HPP
