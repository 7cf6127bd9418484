#include "commlab/analysis/metrics.hpp"

#include <cmath>
#include <stdexcept>

namespace commlab::analysis {

Distribution4::Distribution4(const std::array<double, kNumSymbols>& p) : p_(p) {
  double sum = 0.0;
  for (double x : p_) {
    if (!(x >= 0.0) || !std::isfinite(x)) {
      throw std::invalid_argument("distribution has a negative or non-finite entry");
    }
    sum += x;
  }
  if (std::abs(sum - 1.0) > 1e-9) throw std::invalid_argument("distribution does not sum to 1");
}

Distribution4 Distribution4::from_counts(const std::array<std::size_t, kNumSymbols>& counts) {
  std::size_t total = 0;
  for (auto c : counts) total += c;
  if (total == 0) throw std::invalid_argument("no symbol emissions to normalize");
  std::array<double, kNumSymbols> p{};
  for (std::size_t i = 0; i < kNumSymbols; ++i) {
    p[i] = static_cast<double>(counts[i]) / static_cast<double>(total);
  }
  return Distribution4(p);
}

double mean_final_steps(std::span<const EpisodeRecord> episodes, int window) {
  if (episodes.empty()) throw std::invalid_argument("mean_final_steps: empty run");
  if (window < 1 || static_cast<std::size_t>(window) > episodes.size()) {
    throw std::invalid_argument("mean_final_steps: window exceeds episode count");
  }
  double sum = 0.0;
  for (const auto& e : episodes.last(static_cast<std::size_t>(window))) sum += e.steps;
  return sum / window;
}

double attenuation_rate(double s_psp, double s_ec) {
  if (!(s_ec > 0.0)) throw std::invalid_argument("attenuation_rate: s_ec must be positive");
  return (s_psp - s_ec) / s_ec * 100.0;
}

double shannon_entropy(const Distribution4& d) {
  double h = 0.0;
  for (double p : d.values()) {
    if (p > 0.0) h -= p * std::log2(p);
  }
  return h;
}

double js_divergence(const Distribution4& p, const Distribution4& q) {
  std::array<double, kNumSymbols> mid{};
  for (std::size_t i = 0; i < kNumSymbols; ++i) mid[i] = 0.5 * (p[i] + q[i]);
  // Midpoint of two valid distributions; skip the re-normalization check.
  double h_mid = 0.0;
  for (double m : mid) {
    if (m > 0.0) h_mid -= m * std::log2(m);
  }
  const double jsd = h_mid - 0.5 * (shannon_entropy(p) + shannon_entropy(q));
  return jsd < 0.0 ? 0.0 : jsd;
}

std::array<std::size_t, kNumSymbols> symbol_counts(std::span<const EpisodeRecord> episodes,
                                                   int window, std::optional<AgentId> agent) {
  if (window < 1 || static_cast<std::size_t>(window) > episodes.size()) {
    throw std::invalid_argument("symbol_counts: window exceeds episode count");
  }
  std::array<std::size_t, kNumSymbols> counts{};
  for (const auto& e : episodes.last(static_cast<std::size_t>(window))) {
    for (const auto& ev : e.symbols) {
      if (!agent || ev.agent == *agent) ++counts[static_cast<std::size_t>(ev.symbol)];
    }
  }
  return counts;
}

Distribution4 symbol_distribution(std::span<const EpisodeRecord> episodes, int window,
                                  std::optional<AgentId> agent) {
  return Distribution4::from_counts(symbol_counts(episodes, window, agent));
}

}  // namespace commlab::analysis
