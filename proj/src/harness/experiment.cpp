#include "commlab/harness/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <fstream>
#include <json.hpp>
#include <map>
#include <mutex>
#include <regex>
#include <thread>

#include "commlab/analysis/probe.hpp"
#include "commlab/harness/logs.hpp"

namespace commlab::harness {
namespace fs = std::filesystem;
using OJson = nlohmann::ordered_json;

namespace {

constexpr const char* kRunSummaryFile = "run_summary.json";
constexpr const char* kSummaryFile = "summary.json";
constexpr const char* kConfigFile = "config.json";
const std::regex kRunDirPattern(R"((EC|PSP)_seed_(\d+))");

OJson distribution_json(const analysis::Distribution4& d) {
  auto a = OJson::array();
  for (double p : d.values()) a.push_back(p);
  return a;
}

OJson real_json(double x) {
  // Non-finite values are not representable in JSON.
  return std::isfinite(x) ? OJson(x) : OJson(nullptr);
}

OJson metrics_object(const RunMetrics& m) {
  OJson j;
  j["condition"] = std::string(to_string(m.condition));
  j["seed"] = m.seed;
  j["episodes"] = m.episodes;
  j["window"] = m.window;
  j["final_mean_steps"] = m.final_mean_steps;
  j["final_success_rate"] = m.final_success_rate;
  j["symbol_counts"] = m.symbol_counts;
  j["symbol_distribution"] = distribution_json(m.symbols);
  j["symbol_distribution_a1"] = distribution_json(m.symbols_a1);
  j["symbol_distribution_a2"] = distribution_json(m.symbols_a2);
  j["entropy_bits"] = m.entropy;
  j["inter_agent_jsd_bits"] = m.jsd;
  j["probe_accuracy"] = m.probe_accuracy;
  return j;
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << text;
  if (!out) throw std::runtime_error("write failed: " + path.string());
}

struct LoadedRun {
  Condition condition;
  std::uint64_t seed;
  std::vector<EpisodeRecord> episodes;
};

std::vector<LoadedRun> load_runs(const fs::path& run_dir) {
  if (!fs::is_directory(run_dir)) {
    throw std::runtime_error(run_dir.string() + ": not a directory");
  }
  std::vector<LoadedRun> runs;
  for (const auto& entry : fs::directory_iterator(run_dir)) {
    if (!entry.is_directory()) continue;
    std::smatch m;
    const std::string name = entry.path().filename().string();
    if (!std::regex_match(name, m, kRunDirPattern)) continue;
    runs.push_back({parse_condition(m[1].str()), std::stoull(m[2].str()),
                    read_run_logs(entry.path())});
  }
  if (runs.empty()) {
    throw std::runtime_error(run_dir.string() + ": no complete run directories (<COND>_seed_<n>)");
  }
  std::sort(runs.begin(), runs.end(), [](const LoadedRun& a, const LoadedRun& b) {
    return std::pair(a.condition, a.seed) < std::pair(b.condition, b.seed);
  });
  return runs;
}

int metric_window(std::size_t episodes) {
  return static_cast<int>(std::min<std::size_t>(analysis::kDefaultWindow, episodes));
}

}  // namespace

std::string run_dir_name(Condition condition, std::uint64_t seed) {
  return std::string(to_string(condition)) + "_seed_" + std::to_string(seed);
}

RunMetrics summarize_run(Condition condition, std::uint64_t seed,
                         std::span<const EpisodeRecord> episodes) {
  if (episodes.empty()) throw std::invalid_argument("summarize_run: empty run");
  RunMetrics m;
  m.condition = condition;
  m.seed = seed;
  m.episodes = static_cast<int>(episodes.size());
  m.window = metric_window(episodes.size());
  m.final_mean_steps = analysis::mean_final_steps(episodes, m.window);
  int successes = 0;
  for (const auto& e : episodes.last(static_cast<std::size_t>(m.window))) successes += e.success;
  m.final_success_rate = static_cast<double>(successes) / m.window;
  m.symbol_counts = analysis::symbol_counts(episodes, m.window);
  m.symbols = analysis::Distribution4::from_counts(m.symbol_counts);
  m.symbols_a1 = analysis::symbol_distribution(episodes, m.window, AgentId::A1);
  m.symbols_a2 = analysis::symbol_distribution(episodes, m.window, AgentId::A2);
  m.entropy = analysis::shannon_entropy(m.symbols);
  m.jsd = analysis::js_divergence(m.symbols_a1, m.symbols_a2);
  m.probe_accuracy = analysis::probe_accuracy(analysis::probe_dataset(episodes, m.window), seed);
  return m;
}

std::string run_metrics_json(const RunMetrics& m) { return metrics_object(m).dump(2) + "\n"; }

const ConditionSummary* RunSummary::find(Condition c) const {
  for (const auto& s : conditions) {
    if (s.condition == c) return &s;
  }
  return nullptr;
}

RunSummary summarize(std::vector<RunMetrics> runs) {
  std::sort(runs.begin(), runs.end(), [](const RunMetrics& a, const RunMetrics& b) {
    return std::pair(a.condition, a.seed) < std::pair(b.condition, b.seed);
  });
  RunSummary summary;
  for (Condition cond : {Condition::EC, Condition::PSP}) {
    ConditionSummary cs;
    cs.condition = cond;
    for (const auto& r : runs) {
      if (r.condition == cond) cs.runs.push_back(r);
    }
    if (cs.runs.empty()) continue;
    std::vector<double> steps, jsd, probe;
    std::array<std::size_t, kNumSymbols> pooled{};
    for (const auto& r : cs.runs) {
      steps.push_back(r.final_mean_steps);
      jsd.push_back(r.jsd);
      probe.push_back(r.probe_accuracy);
      for (std::size_t i = 0; i < kNumSymbols; ++i) pooled[i] += r.symbol_counts[i];
    }
    cs.pooled_mean_steps = analysis::mean(steps);
    cs.stderr_mean_steps = analysis::standard_error(steps);
    cs.symbols = analysis::Distribution4::from_counts(pooled);
    cs.entropy = analysis::shannon_entropy(cs.symbols);
    cs.jsd_mean = analysis::mean(jsd);
    cs.jsd_sd = analysis::sample_stddev(jsd);
    cs.probe_mean = analysis::mean(probe);
    cs.probe_sd = analysis::sample_stddev(probe);
    summary.conditions.push_back(std::move(cs));
  }
  const auto* ec = summary.find(Condition::EC);
  const auto* psp = summary.find(Condition::PSP);
  if (ec && psp) {
    Comparison cmp;
    cmp.eta_percent = analysis::attenuation_rate(psp->pooled_mean_steps, ec->pooled_mean_steps);
    if (ec->runs.size() >= 2 && psp->runs.size() >= 2) {
      std::vector<double> a, b;
      for (const auto& r : psp->runs) a.push_back(r.final_mean_steps);
      for (const auto& r : ec->runs) b.push_back(r.final_mean_steps);
      cmp.welch = analysis::welch_t_test(a, b);
    }
    summary.comparison = cmp;
  }
  return summary;
}

std::string RunSummary::to_json() const {
  OJson j;
  auto conds = OJson::object();
  for (const auto& cs : conditions) {
    OJson c;
    auto seeds = OJson::array();
    auto steps = OJson::array();
    auto jsd = OJson::array();
    auto probe = OJson::array();
    auto entropy = OJson::array();
    for (const auto& r : cs.runs) {
      seeds.push_back(r.seed);
      steps.push_back(r.final_mean_steps);
      jsd.push_back(r.jsd);
      probe.push_back(r.probe_accuracy);
      entropy.push_back(r.entropy);
    }
    c["runs"] = cs.runs.size();
    c["window"] = cs.runs.front().window;
    c["seeds"] = seeds;
    c["final_mean_steps_per_seed"] = steps;
    c["pooled_mean_steps"] = cs.pooled_mean_steps;
    c["stderr_mean_steps"] = cs.stderr_mean_steps;
    c["symbol_distribution"] = distribution_json(cs.symbols);
    c["entropy_bits"] = cs.entropy;
    c["entropy_bits_per_seed"] = entropy;
    c["inter_agent_jsd_bits_per_seed"] = jsd;
    c["inter_agent_jsd_bits_mean"] = cs.jsd_mean;
    c["inter_agent_jsd_bits_sd"] = cs.jsd_sd;
    c["probe_accuracy_per_seed"] = probe;
    c["probe_accuracy_mean"] = cs.probe_mean;
    c["probe_accuracy_sd"] = cs.probe_sd;
    conds[std::string(to_string(cs.condition))] = c;
  }
  j["conditions"] = conds;
  if (comparison) {
    OJson c;
    c["eta_percent"] = comparison->eta_percent;
    if (comparison->welch) {
      c["welch_t"] = real_json(comparison->welch->t);
      c["welch_df"] = real_json(comparison->welch->df);
      c["welch_p_two_tailed"] = comparison->welch->p_two_tailed;
    } else {
      c["welch_t"] = nullptr;
      c["welch_df"] = nullptr;
      c["welch_p_two_tailed"] = nullptr;
    }
    j["comparison"] = c;
  } else {
    j["comparison"] = nullptr;
  }
  return j.dump(2) + "\n";
}

RunSummary run_experiment(const Config& config, const ExperimentOptions& options) {
  for (auto cond : config.conditions) config.training(cond).validate();

  const fs::path out(config.output_dir);
  std::error_code ec;
  fs::create_directories(out, ec);
  if (ec || !fs::is_directory(out)) {
    throw std::runtime_error("cannot create output directory " + out.string());
  }
  for (const auto& entry : fs::directory_iterator(out)) {
    const std::string name = entry.path().filename().string();
    std::string stem = name;
    if (stem.ends_with(".partial")) stem.resize(stem.size() - 8);
    if (entry.is_directory() && std::regex_match(stem, kRunDirPattern)) fs::remove_all(entry);
  }
  fs::remove(out / kSummaryFile);
  write_text(out / kConfigFile, config.to_json());

  struct Job {
    Condition condition;
    std::uint64_t seed;
  };
  std::vector<Job> jobs;
  for (auto cond : config.conditions) {
    for (int i = 0; i < config.runs; ++i) jobs.push_back({cond, config.seed(i)});
  }

  std::atomic<std::size_t> next{0};
  std::mutex mu;
  std::exception_ptr failure;
  const auto worker = [&] {
    for (std::size_t k = next++; k < jobs.size(); k = next++) {
      {
        std::lock_guard lock(mu);
        if (failure) return;
      }
      const Job& job = jobs[k];
      const fs::path final_dir = out / run_dir_name(job.condition, job.seed);
      const fs::path partial = fs::path(final_dir.string() + ".partial");
      try {
        const RunResult result = run_training(config.training(job.condition), job.seed);
        fs::create_directories(partial);
        write_episodes_csv(partial / kEpisodesFile, result.episodes);
        write_symbols_csv(partial / kSymbolsFile, result.episodes);
        const RunMetrics m = summarize_run(job.condition, job.seed, result.episodes);
        write_text(partial / kRunSummaryFile, run_metrics_json(m));
        fs::rename(partial, final_dir);
        if (options.on_run_complete) {
          std::lock_guard lock(mu);
          options.on_run_complete(m);
        }
      } catch (...) {
        std::error_code ignored;
        fs::remove_all(partial, ignored);
        std::lock_guard lock(mu);
        if (!failure) failure = std::current_exception();
        return;
      }
    }
  };

  unsigned n_threads = options.jobs ? options.jobs : std::thread::hardware_concurrency();
  n_threads = std::clamp<unsigned>(n_threads, 1, static_cast<unsigned>(jobs.size()));
  if (n_threads == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned t = 0; t < n_threads; ++t) pool.emplace_back(worker);
  }
  if (failure) std::rethrow_exception(failure);

  RunSummary summary = analyze(out);
  write_text(out / kSummaryFile, summary.to_json());
  return summary;
}

RunSummary analyze(const fs::path& run_dir) {
  std::vector<RunMetrics> metrics;
  for (const auto& run : load_runs(run_dir)) {
    metrics.push_back(summarize_run(run.condition, run.seed, run.episodes));
  }
  return summarize(std::move(metrics));
}

std::vector<fs::path> emit_plot_data(const fs::path& run_dir) {
  const auto runs = load_runs(run_dir);
  const fs::path plot = run_dir / "plot";
  fs::create_directories(plot);

  std::map<Condition, std::vector<const LoadedRun*>> by_condition;
  for (const auto& r : runs) by_condition[r.condition].push_back(&r);

  std::ofstream curve(plot / "learning_curve.csv", std::ios::binary);
  std::ofstream smooth(plot / "learning_curve_smoothed.csv", std::ios::binary);
  std::ofstream freq(plot / "symbol_frequency.csv", std::ios::binary);
  std::ofstream entropy(plot / "entropy.csv", std::ios::binary);
  if (!curve || !smooth || !freq || !entropy) {
    throw std::runtime_error("cannot write plot data under " + plot.string());
  }
  curve << "episode,mean,stderr,condition\n";
  smooth << "episode,mean,condition\n";
  freq << "condition,symbol,frequency\n";
  entropy << "episode,entropy,condition\n";

  for (const auto& [cond, group] : by_condition) {
    const std::string name(to_string(cond));
    std::size_t n_episodes = group.front()->episodes.size();
    for (const auto* r : group) n_episodes = std::min(n_episodes, r->episodes.size());

    std::vector<double> means(n_episodes);
    for (std::size_t e = 0; e < n_episodes; ++e) {
      std::vector<double> xs;
      for (const auto* r : group) xs.push_back(r->episodes[e].steps);
      means[e] = analysis::mean(xs);
      curve << e << ',' << format_real(means[e]) << ','
            << format_real(analysis::standard_error(xs)) << ',' << name << '\n';
    }

    double running = 0.0;
    for (std::size_t e = 0; e < n_episodes; ++e) {
      running += means[e];
      if (e >= static_cast<std::size_t>(kSmoothingWindow)) running -= means[e - kSmoothingWindow];
      const auto span = std::min<std::size_t>(e + 1, kSmoothingWindow);
      smooth << e << ',' << format_real(running / static_cast<double>(span)) << ',' << name
             << '\n';
    }

    std::vector<RunMetrics> metrics;
    for (const auto* r : group) metrics.push_back(summarize_run(cond, r->seed, r->episodes));
    const auto summary = summarize(std::move(metrics));
    const auto& dist = summary.conditions.front().symbols;
    for (std::size_t s = 0; s < kNumSymbols; ++s) {
      freq << name << ',' << s << ',' << format_real(dist[s]) << '\n';
    }

    // Sliding pooled counts over episodes (e-49 .. e) of every run.
    std::vector<std::array<std::size_t, kNumSymbols>> per_episode(n_episodes);
    for (const auto* r : group) {
      for (std::size_t e = 0; e < n_episodes; ++e) {
        for (const auto& ev : r->episodes[e].symbols) {
          ++per_episode[e][static_cast<std::size_t>(ev.symbol)];
        }
      }
    }
    std::array<std::size_t, kNumSymbols> window{};
    for (std::size_t e = 0; e < n_episodes; ++e) {
      for (std::size_t s = 0; s < kNumSymbols; ++s) window[s] += per_episode[e][s];
      if (e >= static_cast<std::size_t>(kSmoothingWindow)) {
        for (std::size_t s = 0; s < kNumSymbols; ++s) {
          window[s] -= per_episode[e - kSmoothingWindow][s];
        }
      }
      const double h =
          analysis::shannon_entropy(analysis::Distribution4::from_counts(window));
      entropy << e << ',' << format_real(h) << ',' << name << '\n';
    }
  }
  return {plot / "learning_curve.csv", plot / "learning_curve_smoothed.csv",
          plot / "symbol_frequency.csv", plot / "entropy.csv"};
}

}  // namespace commlab::harness
