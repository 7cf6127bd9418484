// commlab: run the EC / PSP navigation experiment and derive its metrics.
//
//   commlab run --config cfg.json [--out DIR] [--jobs N]
//   commlab analyze DIR [--write]
//   commlab plot-data DIR
//   commlab info
#include <CLI11.hpp>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>

#include "commlab/harness/config.hpp"
#include "commlab/harness/experiment.hpp"
#include "commlab/harness/logs.hpp"
#include "commlab/simd/kernels.hpp"

namespace fs = std::filesystem;
using namespace commlab;

int main(int argc, char** argv) {
  CLI::App app{"Emergent vs. pre-defined communication in a cooperative gridworld"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_override;
  unsigned jobs = 0;
  auto* run = app.add_subcommand("run", "Train every condition x seed and write logs + summary");
  run->add_option("--config", config_path, "JSON config file")->required();
  run->add_option("--out", out_override, "Override output_dir from the config");
  run->add_option("--jobs", jobs, "Concurrent runs (0 = hardware concurrency)");

  std::string analyze_dir;
  bool write_summary = false;
  auto* analyze = app.add_subcommand("analyze", "Recompute the summary from logs; prints JSON");
  analyze->add_option("dir", analyze_dir, "Experiment output directory")->required();
  analyze->add_flag("--write", write_summary, "Also overwrite <dir>/summary.json");

  std::string plot_dir;
  auto* plot = app.add_subcommand("plot-data", "Write plot series CSVs into <dir>/plot");
  plot->add_option("dir", plot_dir, "Experiment output directory")->required();

  auto* info = app.add_subcommand("info", "Show the selected arithmetic kernels");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run) {
      auto config = harness::load_config(config_path);
      if (!out_override.empty()) config.output_dir = out_override;
      harness::ExperimentOptions opts;
      opts.jobs = jobs;
      opts.on_run_complete = [](const harness::RunMetrics& m) {
        std::cerr << to_string(m.condition) << " seed " << m.seed
                  << ": final mean steps " << m.final_mean_steps << '\n';
      };
      std::cerr << "kernels: " << simd::active().name << '\n';
      const auto summary = harness::run_experiment(config, opts);
      std::cout << summary.to_json();
    } else if (*analyze) {
      const auto summary = harness::analyze(analyze_dir);
      const std::string text = summary.to_json();
      if (write_summary) {
        std::ofstream out(fs::path(analyze_dir) / "summary.json", std::ios::binary);
        out << text;
        if (!out) throw std::runtime_error("cannot write summary.json");
      }
      std::cout << text;
    } else if (*plot) {
      for (const auto& p : harness::emit_plot_data(plot_dir)) std::cout << p.string() << '\n';
    } else if (*info) {
      std::cout << "active kernels: " << simd::active().name << '\n'
                << "avx2 available: " << (simd::avx2_kernels() ? "yes" : "no") << '\n';
    }
  } catch (const harness::ConfigError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
