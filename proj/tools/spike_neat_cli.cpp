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

#include <cstdio>
#include <exception>
#include <filesystem>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "spike_neat/spike_neat.hpp"

namespace fs = std::filesystem;
using namespace spike_neat;

namespace {

int cmd_run(const std::string& config_path, const std::string& out_dir, bool verbose) {
  const TaskConfig cfg = load_config(config_path);
  GenerationObserver observer;
  if (verbose) {
    observer = [](const Population& pop, double best) {
      std::fprintf(stderr, "gen %3d  best %8.0f  species %zu\n", pop.generation + 1, best, pop.species.size());
    };
  }
  const RunResult r = run_evolution(cfg, observer);
  if (r.generations)
    std::printf("success generation %d\n", *r.generations);
  else
    std::printf("failure after %d generations (best fitness %.0f)\n", cfg.max_generations, r.best_fitness.back());
  if (!out_dir.empty()) {
    fs::create_directories(out_dir);
    write_file(fs::path(out_dir) / "champion.genome", serialize(r.champion));
    write_file(fs::path(out_dir) / "trajectory.csv",
               cartpole::trajectory_csv(replay(r.champion, cfg, cfg.success_steps).trajectory));
    ProgressSeries p{r.best_fitness, std::vector<double>(r.best_fitness.size(), 0.0)};
    write_file(fs::path(out_dir) / "progress.csv", progress_csv(p));
  }
  return r.success() ? 0 : 2;
}

int cmd_campaign(const std::string& config_path, int runs, const std::string& out_dir) {
  const TaskConfig cfg = load_config(config_path);
  const auto result = campaign(cfg, runs, [&](int run, const RunResult& rr) {
    if (rr.generations)
      std::fprintf(stderr, "run %d: success at generation %d\n", run, *rr.generations);
    else
      std::fprintf(stderr, "run %d: failure\n", run);
  });
  write_campaign(out_dir, result, cfg);
  std::fputs(stats_text(result.summary).c_str(), stdout);
  return 0;
}

int cmd_fi_curve(const std::string& preset, const std::string& out, double i_min, double i_max, int steps, int window) {
  NeuronParams p;
  if (preset == "default")
    p = NeuronParams::network_default();
  else if (preset == "chattering")
    p = NeuronParams::chattering();
  else
    throw std::invalid_argument("unknown preset '" + preset + "' (expected default or chattering)");
  const auto csv = fi_curve_csv(fi_curve(p, i_min, i_max, steps, window));
  if (out.empty() || out == "-")
    std::fputs(csv.c_str(), stdout);
  else
    write_file(out, csv);
  return 0;
}

int cmd_compare(const std::string& a, const std::string& b) {
  const auto sa = read_summary_outcomes(fs::path(a) / "summary.csv");
  const auto sb = read_summary_outcomes(fs::path(b) / "summary.csv");
  std::fputs(compare_report(sa, sb).c_str(), stdout);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Neuroevolution of spiking and sigmoid controllers for cart-pole balancing"};
  app.require_subcommand(1);

  std::string config, out_dir;
  bool verbose = false;
  auto* run = app.add_subcommand("run", "Single evolutionary run");
  run->add_option("--config", config, "Config file (key = value)")->required()->check(CLI::ExistingFile);
  run->add_option("--out", out_dir, "Directory for champion.genome, trajectory.csv, progress.csv");
  run->add_flag("-v,--verbose", verbose, "Print per-generation progress to stderr");

  int runs = 20;
  std::string campaign_out;
  auto* camp = app.add_subcommand("campaign", "Repeated runs with consecutive seeds");
  camp->add_option("--config", config, "Config file (key = value)")->required()->check(CLI::ExistingFile);
  camp->add_option("--runs", runs, "Number of runs")->check(CLI::PositiveNumber);
  camp->add_option("--out", campaign_out, "Output directory")->required();

  std::string preset = "chattering", fi_out;
  double i_min = 0.0, i_max = 200.0;
  int steps = 21, window = 1000;
  auto* fi = app.add_subcommand("fi-curve", "Firing rate versus injected current");
  fi->add_option("--params", preset, "Parameter preset: default | chattering");
  fi->add_option("--out", fi_out, "CSV output file (default stdout)");
  fi->add_option("--min", i_min, "Lowest current");
  fi->add_option("--max", i_max, "Highest current");
  fi->add_option("--steps", steps, "Number of current levels");
  fi->add_option("--window", window, "Simulation window in ms");

  std::string dir_a, dir_b;
  auto* cmp = app.add_subcommand("compare", "Mann-Whitney U comparison of two campaigns");
  cmp->add_option("--a", dir_a, "First campaign directory")->required();
  cmp->add_option("--b", dir_b, "Second campaign directory")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run) return cmd_run(config, out_dir, verbose);
    if (*camp) return cmd_campaign(config, runs, campaign_out);
    if (*fi) return cmd_fi_curve(preset, fi_out, i_min, i_max, steps, window);
    if (*cmp) return cmd_compare(dir_a, dir_b);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}
