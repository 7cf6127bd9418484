// End-to-end acceptance run: prints one PASS/FAIL line per criterion and
// exits nonzero if any criterion fails.
//
// usage: acceptance [output_dir]
#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "commlab/analysis/metrics.hpp"
#include "commlab/analysis/stats.hpp"
#include "commlab/harness/config.hpp"
#include "commlab/harness/experiment.hpp"
#include "commlab/harness/logs.hpp"
#include "commlab/neural/adam.hpp"
#include "commlab/neural/mlp.hpp"
#include "oracles.hpp"

using namespace commlab;
using namespace commlab::harness;
namespace fs = std::filesystem;

namespace {

std::map<int, std::pair<bool, std::string>> results;
std::string training_note;

void report(int id, bool ok, const std::string& what, const std::string& detail) {
  results[id] = {ok, what + " | " + detail};
  std::fprintf(stderr, "criterion %d evaluated: %s\n", id, ok ? "PASS" : "FAIL");
}

std::string fmt(const char* f, double a) {
  char buf[128];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

bool close(double got, double want, double tol) { return std::abs(got - want) <= tol; }

std::vector<EpisodeRecord> episodes_with_steps(const std::vector<int>& steps) {
  std::vector<EpisodeRecord> out;
  for (std::size_t i = 0; i < steps.size(); ++i) {
    EpisodeRecord r;
    r.episode = static_cast<int>(i);
    r.steps = steps[i];
    out.push_back(r);
  }
  return out;
}

analysis::Distribution4 dist(double a, double b, double c, double d) {
  return analysis::Distribution4({a, b, c, d});
}

void numerical_core() {
  // Gradient check on 100 random networks away from ReLU kinks.
  Rng rng(2718);
  int cases = 0, bad = 0;
  double worst = 0.0;
  while (cases < 100) {
    const std::size_t in = 1 + rng.index(8), hidden = 1 + rng.index(8), out = 1 + rng.index(5);
    const auto net = neural::Mlp::init(in, hidden, out, rng);
    std::vector<double> x(in), g(out);
    for (auto& v : x) v = rng.uniform(-1, 1);
    for (auto& v : g) v = rng.uniform(-1, 1);
    const auto cache = net.forward(x);
    bool near_kink = false;
    for (double z : cache.hidden_pre) near_kink |= std::abs(z) < 1e-3;
    if (near_kink) continue;
    neural::MlpGradients analytic(net.shape());
    net.backward(cache, g, analytic);
    const auto numeric = oracle::finite_difference_gradient(net, x, g);
    bool ok = true;
    for (std::size_t i = 0; i < numeric.size(); ++i) {
      const double a = analytic.values[i], n = numeric[i];
      const double rel = std::abs(a - n) / std::max({std::abs(a), std::abs(n), 1e-8});
      worst = std::max(worst, rel);
      ok &= rel < 1e-4;
    }
    bad += !ok;
    ++cases;
  }

  // Adam on (w - 3)^2 through the network's bias parameter.
  auto net = neural::Mlp::zeros(1, 1, 1);
  neural::AdamState state(net.shape());
  for (int t = 0; t < 20000; ++t) {
    neural::MlpGradients grad(net.shape());
    grad.values[3] = 2.0 * (net.parameters()[3] - 3.0);
    neural::adam_step(net, grad, state, 1e-3);
  }
  const double w = net.parameters()[3];

  // Welch against values frozen from scipy.stats.ttest_ind(equal_var=False).
  const std::vector<double> a{1, 2, 3}, b{4, 5, 6};
  const auto welch = analysis::welch_t_test(a, b);
  const bool welch_ok = close(welch.t, -3.6742346141747673, 5e-5) &&
                        close(welch.df, 4.0, 5e-5) &&
                        close(welch.p_two_tailed, 0.021311641128756727, 5e-5);

  std::ostringstream d;
  d << "gradient cases failing " << bad << "/100 (worst rel err " << worst << "); adam w=" << w
    << " (|w-3|=" << std::abs(w - 3.0) << "); welch t=" << welch.t << " df=" << welch.df
    << " p=" << welch.p_two_tailed;
  report(6, bad == 0 && std::abs(w - 3.0) < 0.01 && welch_ok,
         "gradient check, Adam convergence, Welch oracle", d.str());
}

void metric_oracles() {
  constexpr double tol = 1e-9;
  int bad = 0;
  std::ostringstream d;
  const auto expect = [&](const char* name, double got, double want) {
    if (!close(got, want, tol)) {
      ++bad;
      d << name << " got " << got << " want " << want << "; ";
    }
  };

  expect("mean_final_steps(all 100)",
         analysis::mean_final_steps(episodes_with_steps(std::vector<int>(150, 100))), 100.0);
  std::vector<int> alt;
  for (int i = 0; i < 100; ++i) alt.push_back(i % 2 ? 40 : 20);
  expect("mean_final_steps(20/40)", analysis::mean_final_steps(episodes_with_steps(alt)), 30.0);

  expect("eta(43.2,28.7)", analysis::attenuation_rate(43.2, 28.7), (43.2 - 28.7) / 28.7 * 100);
  expect("eta(x,x)", analysis::attenuation_rate(17.5, 17.5), 0.0);
  expect("eta(30,20)", analysis::attenuation_rate(30, 20), 50.0);

  expect("H(uniform)", analysis::shannon_entropy(dist(0.25, 0.25, 0.25, 0.25)), 2.0);
  expect("H(1,0,0,0)", analysis::shannon_entropy(dist(1, 0, 0, 0)), 0.0);
  expect("H(dyadic)", analysis::shannon_entropy(dist(0.5, 0.25, 0.125, 0.125)), 1.75);

  const auto p = dist(0.1, 0.2, 0.3, 0.4);
  expect("JSD(p,p)", analysis::js_divergence(p, p), 0.0);
  expect("JSD(disjoint)", analysis::js_divergence(dist(1, 0, 0, 0), dist(0, 1, 0, 0)), 1.0);
  expect("JSD(half,uniform)",
         analysis::js_divergence(dist(0.5, 0.5, 0, 0), dist(0.25, 0.25, 0.25, 0.25)),
         oracle::jsd_via_kl({0.5, 0.5, 0, 0}, {0.25, 0.25, 0.25, 0.25}));

  d << bad << " mismatches over 11 examples; eta(43.2,28.7)="
    << fmt("%.4f", analysis::attenuation_rate(43.2, 28.7));
  report(8, bad == 0, "metric oracle examples at 1e-9", d.str());
}

void determinism(const fs::path& root) {
  std::string summaries[2];
  for (int i = 0; i < 2; ++i) {
    Config c = parse_config(R"({"episodes": 50, "runs": 2})");
    c.output_dir = (root / ("smoke_" + std::to_string(i))).string();
    run_experiment(c);
    summaries[i] = slurp(fs::path(c.output_dir) / "summary.json");
  }
  const bool same = !summaries[0].empty() && summaries[0] == summaries[1];
  report(7, same, "smoke config twice gives byte-identical summary.json",
         std::to_string(summaries[0].size()) + " bytes, " + (same ? "identical" : "differ"));
}

// Mean of steps over episodes [from, from + n).
double block_mean(const std::vector<EpisodeRecord>& eps, std::size_t from, std::size_t n) {
  double s = 0.0;
  for (std::size_t i = from; i < from + n; ++i) s += eps[i].steps;
  return s / static_cast<double>(n);
}

void full_experiment(const fs::path& root) {
  Config config = parse_config("{}");
  config.output_dir = (root / "default").string();
  ExperimentOptions options;
  options.on_run_complete = [](const RunMetrics& m) {
    std::fprintf(stderr, "  finished %s final_mean_steps=%.2f\n",
                 run_dir_name(m.condition, m.seed).c_str(), m.final_mean_steps);
  };
  const auto summary = run_experiment(config, options);
  const auto* ec = summary.find(Condition::EC);
  const auto* psp = summary.find(Condition::PSP);
  if (!ec || !psp || !summary.comparison || !summary.comparison->welch) {
    for (int id = 1; id <= 5; ++id) report(id, false, "default experiment", "summary incomplete");
    return;
  }

  // 1: directional attenuation.
  {
    const auto& cmp = *summary.comparison;
    const bool ok = psp->pooled_mean_steps > ec->pooled_mean_steps &&
                    cmp.welch->p_two_tailed < 0.05 && cmp.eta_percent >= 15.0;
    std::ostringstream d;
    d << "S_EC=" << fmt("%.3f", ec->pooled_mean_steps)
      << " S_PSP=" << fmt("%.3f", psp->pooled_mean_steps)
      << " eta=" << fmt("%.1f", cmp.eta_percent) << "% (reference 50.5%)"
      << " welch t=" << fmt("%.3f", cmp.welch->t) << " df=" << fmt("%.2f", cmp.welch->df)
      << " p=" << fmt("%.4f", cmp.welch->p_two_tailed);
    report(1, ok, "S_PSP > S_EC, Welch p < 0.05, eta >= 15%", d.str());
  }

  // 2: learning beats the random baseline by 2x.
  {
    const GridWorld env(config.training(Condition::EC).grid);
    const double baseline = oracle::random_policy_mean_steps(env, 1000, 0);
    std::ostringstream d;
    d << "S_EC=" << fmt("%.3f", ec->pooled_mean_steps) << " random baseline="
      << fmt("%.3f", baseline) << " ratio=" << fmt("%.3f", ec->pooled_mean_steps / baseline);
    report(2, ec->pooled_mean_steps < 0.5 * baseline, "EC final mean < 50% of random baseline",
           d.str());
  }

  // 3: probe accuracies.
  {
    bool psp_exact = true;
    for (const auto& r : psp->runs) psp_exact &= r.probe_accuracy == 1.0;
    const bool ec_ok = ec->probe_mean > 0.35 && ec->probe_mean < 1.0;
    std::ostringstream d;
    d << "PSP probe mean=" << psp->probe_mean << (psp_exact ? " (every run 1.0)" : " (not all 1.0)")
      << " EC probe=" << fmt("%.3f", ec->probe_mean) << " +- " << fmt("%.3f", ec->probe_sd);
    report(3, psp_exact && psp->probe_mean == 1.0 && ec_ok,
           "PSP probe == 1.0, EC probe in (0.35, 1.0)", d.str());
  }

  // 4: inter-agent agreement under EC.
  report(4, ec->jsd_mean < 0.2, "EC inter-agent JSD < 0.2 bits",
         "EC JSD=" + fmt("%.4f", ec->jsd_mean) + " +- " + fmt("%.4f", ec->jsd_sd));

  // 5: every reported entropy within [0, 2].
  {
    int checked = 0, bad = 0;
    double lo = 2.0, hi = 0.0;
    const auto see = [&](double h) {
      ++checked;
      bad += !(h >= 0.0 && h <= 2.0);
      lo = std::min(lo, h);
      hi = std::max(hi, h);
    };
    for (const auto* c : {ec, psp}) {
      see(c->entropy);
      for (const auto& r : c->runs) see(r.entropy);
    }
    emit_plot_data(config.output_dir);
    std::ifstream in(fs::path(config.output_dir) / "plot" / "entropy.csv");
    std::string line;
    std::getline(in, line);
    while (std::getline(in, line)) {
      const auto a = line.find(','), b = line.find(',', a + 1);
      see(std::stod(line.substr(a + 1, b - a - 1)));
    }
    std::ostringstream d;
    d << checked << " entropies in [" << fmt("%.4f", lo) << ", " << fmt("%.4f", hi)
      << "], EC pooled=" << fmt("%.3f", ec->entropy) << " PSP pooled=" << fmt("%.3f", psp->entropy);
    report(5, bad == 0 && checked > 0, "all entropies within [0, 2] bits", d.str());
  }

  // Training invariant, informational: smoothed EC curve ends below where it starts.
  {
    const auto logs_root = fs::path(config.output_dir);
    int improved = 0;
    for (const auto& r : ec->runs) {
      const auto logs = read_run_logs(logs_root / run_dir_name(Condition::EC, r.seed));
      const std::size_t n = logs.size(), w = kSmoothingWindow;
      improved += block_mean(logs, n - w, w) < block_mean(logs, 0, w);
    }
    training_note = "info: EC smoothed learning curve improves on " + std::to_string(improved) +
                    "/" + std::to_string(ec->runs.size()) + " seeds";
  }
}

}  // namespace

int main(int argc, char** argv) {
  const fs::path root = argc > 1 ? fs::path(argv[1]) : fs::path("acceptance_out");
  try {
    fs::create_directories(root);
    numerical_core();
    metric_oracles();
    determinism(root);
    full_experiment(root);
  } catch (const std::exception& e) {
    std::printf("acceptance aborted: %s\n", e.what());
    return 2;
  }
  int failures = 0;
  for (const auto& [id, r] : results) {
    std::printf("criterion %d %s: %s\n", id, r.first ? "PASS" : "FAIL", r.second.c_str());
    failures += !r.first;
  }
  failures += 8 - static_cast<int>(results.size());
  if (!training_note.empty()) std::printf("%s\n", training_note.c_str());
  std::printf("acceptance: %d criterion failure(s)\n", failures);
  return failures == 0 ? 0 : 1;
}
