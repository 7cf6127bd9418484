// Multi-seed experiment execution, log analysis and plot-series export.
//
// Output layout of run_experiment(config):
//
//   <output_dir>/config.json           resolved configuration
//   <output_dir>/<COND>_seed_<n>/      one directory per condition x seed
//       episodes.csv, symbols.csv, run_summary.json
//   <output_dir>/summary.json          cross-condition summary
//
// A run directory is written as <name>.partial and renamed on completion,
// so an interrupted run never looks complete.
#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "commlab/analysis/metrics.hpp"
#include "commlab/analysis/stats.hpp"
#include "commlab/harness/config.hpp"
#include "commlab/training.hpp"

namespace commlab::harness {

inline constexpr int kSmoothingWindow = 50;

struct RunMetrics {
  Condition condition = Condition::EC;
  std::uint64_t seed = 0;
  int episodes = 0;
  int window = 0;  // min(100, episodes)
  double final_mean_steps = 0.0;
  double final_success_rate = 0.0;
  std::array<std::size_t, kNumSymbols> symbol_counts{};  // both agents, final window
  analysis::Distribution4 symbols{{0.25, 0.25, 0.25, 0.25}};
  analysis::Distribution4 symbols_a1{{0.25, 0.25, 0.25, 0.25}};
  analysis::Distribution4 symbols_a2{{0.25, 0.25, 0.25, 0.25}};
  double entropy = 0.0;
  double jsd = 0.0;  // between the two agents' distributions
  double probe_accuracy = 0.0;
};

struct ConditionSummary {
  Condition condition = Condition::EC;
  std::vector<RunMetrics> runs;  // ascending seed
  double pooled_mean_steps = 0.0;
  double stderr_mean_steps = 0.0;
  analysis::Distribution4 symbols{{0.25, 0.25, 0.25, 0.25}};  // pooled counts over runs
  double entropy = 0.0;                                        // of `symbols`
  double jsd_mean = 0.0;
  double jsd_sd = 0.0;
  double probe_mean = 0.0;
  double probe_sd = 0.0;
};

struct Comparison {
  double eta_percent = 0.0;  // (S_PSP - S_EC) / S_EC * 100
  std::optional<analysis::WelchResult> welch;  // absent with < 2 runs per side
};

struct RunSummary {
  std::vector<ConditionSummary> conditions;  // EC before PSP
  std::optional<Comparison> comparison;      // both conditions present

  const ConditionSummary* find(Condition c) const;
  std::string to_json() const;
};

RunMetrics summarize_run(Condition condition, std::uint64_t seed,
                         std::span<const EpisodeRecord> episodes);
std::string run_metrics_json(const RunMetrics& m);

RunSummary summarize(std::vector<RunMetrics> runs);

std::string run_dir_name(Condition condition, std::uint64_t seed);

struct ExperimentOptions {
  unsigned jobs = 0;  // 0: hardware concurrency
  std::function<void(const RunMetrics&)> on_run_complete;
};

// Runs every condition x seed, writes all artifacts and returns the summary
// that was written to summary.json. Existing run directories in the
// output directory are replaced.
RunSummary run_experiment(const Config& config, const ExperimentOptions& options = {});

// Recomputes the summary from the logs under `run_dir` alone. Throws
// LogError / std::runtime_error naming the offending file.
RunSummary analyze(const std::filesystem::path& run_dir);

// Writes plot series into <run_dir>/plot and returns their paths:
//   learning_curve.csv           episode,mean,stderr,condition
//   learning_curve_smoothed.csv  episode,mean,condition   (trailing window 50)
//   symbol_frequency.csv         condition,symbol,frequency (final window)
//   entropy.csv                  episode,entropy,condition (trailing window 50)
std::vector<std::filesystem::path> emit_plot_data(const std::filesystem::path& run_dir);

}  // namespace commlab::harness
