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

#ifndef SPIKE_NEAT_CAMPAIGN_HPP
#define SPIKE_NEAT_CAMPAIGN_HPP

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "spike_neat/evolution.hpp"
#include "spike_neat/genome.hpp"
#include "spike_neat/stats.hpp"

namespace spike_neat {

struct CampaignResult {
  std::vector<std::optional<int>> generations;  // per run, nullopt = failure
  std::vector<std::vector<double>> best_fitness;
  std::vector<Genome> champions;
  RunSummary summary;
  ProgressSeries progress;
  int failure_value = 101;

  /// Per-run generation counts with failures encoded as failure_value.
  std::vector<double> outcomes() const {
    std::vector<double> out;
    for (const auto& g : generations) out.push_back(g ? *g : failure_value);
    return out;
  }
};

/// Runs `runs` evolutions with seeds seed, seed+1, ...
inline CampaignResult campaign(const TaskConfig& cfg, int runs, const std::function<void(int, const RunResult&)>& on_run = {}) {
  if (runs < 1) throw std::invalid_argument("campaign: runs must be >= 1");
  CampaignResult out;
  out.failure_value = cfg.failure_generations();
  for (int r = 0; r < runs; ++r) {
    TaskConfig c = cfg;
    c.seed = cfg.seed + static_cast<std::uint64_t>(r);
    RunResult rr = run_evolution(c);
    rr.champion.id = r;
    out.generations.push_back(rr.generations);
    out.best_fitness.push_back(rr.best_fitness);
    out.champions.push_back(rr.champion);
    if (on_run) on_run(r, rr);
  }
  out.summary = summarize(out.generations, out.failure_value);
  out.progress = fitness_progress(out.best_fitness);
  return out;
}

/// Index of the run whose champion is replayed: fewest generations among
/// successes, otherwise highest final best fitness. Lowest index on ties.
inline std::size_t showcase_run(const CampaignResult& r) {
  std::size_t best = 0;
  auto key = [&](std::size_t i) {
    return r.generations[i] ? std::pair<int, double>{0, *r.generations[i]}
                            : std::pair<int, double>{1, -r.best_fitness[i].back()};
  };
  for (std::size_t i = 1; i < r.generations.size(); ++i)
    if (key(i) < key(best)) best = i;
  return best;
}

inline std::string summary_csv(const CampaignResult& r) {
  std::string out = "run,generations,success\n";
  for (std::size_t i = 0; i < r.generations.size(); ++i) {
    const auto& g = r.generations[i];
    out += std::to_string(i) + "," + std::to_string(g ? *g : r.failure_value) + "," + (g ? "1" : "0") + "\n";
  }
  return out;
}

inline std::string progress_csv(const ProgressSeries& p) {
  std::string out = "generation,mean_best_fitness,sd\n";
  char buf[96];
  for (std::size_t t = 0; t < p.mean.size(); ++t) {
    std::snprintf(buf, sizeof buf, "%zu,%.17g,%.17g\n", t + 1, p.mean[t], p.sd[t]);
    out += buf;
  }
  return out;
}

inline std::string stats_text(const RunSummary& s) {
  char buf[256];
  std::snprintf(buf, sizeof buf, "runs %zu\nbest %s\nworst %s\nmedian %.2f\nmean %.2f\nfailures %zu/%zu\n", s.runs,
                s.best ? std::to_string(*s.best).c_str() : "-", s.worst ? std::to_string(*s.worst).c_str() : "-",
                s.median, s.mean, s.failures, s.runs);
  return buf;
}

inline void write_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot write '" + path.string() + "'");
  f << content;
}

inline std::string read_file(const std::filesystem::path& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot read '" + path.string() + "'");
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

/// Writes summary.csv, progress.csv, champion.genome (one record per run, id =
/// run index), trajectory.csv (replay of the showcase champion) and stats.txt.
inline void write_campaign(const std::filesystem::path& dir, const CampaignResult& r, const TaskConfig& cfg) {
  std::filesystem::create_directories(dir);
  write_file(dir / "summary.csv", summary_csv(r));
  write_file(dir / "progress.csv", progress_csv(r.progress));
  std::string genomes;
  for (const auto& g : r.champions) genomes += serialize(g);
  write_file(dir / "champion.genome", genomes);
  const auto& champ = r.champions[showcase_run(r)];
  write_file(dir / "trajectory.csv", cartpole::trajectory_csv(replay(champ, cfg, cfg.success_steps).trajectory));
  write_file(dir / "stats.txt", stats_text(r.summary));
}

/// Reads the per-run generation column of a summary.csv.
inline std::vector<double> read_summary_outcomes(const std::filesystem::path& csv) {
  std::istringstream in(read_file(csv));
  std::string line;
  if (!std::getline(in, line) || line != "run,generations,success")
    throw std::runtime_error("'" + csv.string() + "' is not a summary.csv");
  std::vector<double> out;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto c1 = line.find(',');
    const auto c2 = line.find(',', c1 + 1);
    if (c1 == std::string::npos || c2 == std::string::npos) throw std::runtime_error("malformed summary row: " + line);
    out.push_back(std::stod(line.substr(c1 + 1, c2 - c1 - 1)));
  }
  return out;
}

inline std::string compare_report(const std::vector<double>& a, const std::vector<double>& b) {
  const auto mw = mann_whitney_u(a, b);
  char buf[320];
  std::snprintf(buf, sizeof buf,
                "n_a %zu\nn_b %zu\nmedian_a %.2f\nmedian_b %.2f\nmean_a %.2f\nmean_b %.2f\nU_a %.1f\nU_b %.1f\np %.6g\nmethod %s\n",
                a.size(), b.size(), median(a), median(b), mean(a), mean(b), mw.u_a, mw.u_b, mw.p,
                mw.exact ? "exact" : "normal");
  return buf;
}

}  // namespace spike_neat

#endif  // SPIKE_NEAT_CAMPAIGN_HPP
