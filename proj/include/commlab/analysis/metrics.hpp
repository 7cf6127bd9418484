// Efficiency and symbol-usage metrics over episode logs.
#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <span>

#include "commlab/gridworld.hpp"
#include "commlab/training.hpp"

namespace commlab::analysis {

inline constexpr int kDefaultWindow = 100;

// Four non-negative probabilities summing to 1 (within 1e-9).
class Distribution4 {
 public:
  // Throws std::invalid_argument unless `p` is a valid distribution.
  explicit Distribution4(const std::array<double, kNumSymbols>& p);

  // Normalizes non-negative counts; throws when all counts are zero.
  static Distribution4 from_counts(const std::array<std::size_t, kNumSymbols>& counts);

  double operator[](std::size_t i) const { return p_[i]; }
  const std::array<double, kNumSymbols>& values() const { return p_; }

 private:
  std::array<double, kNumSymbols> p_;
};

// Mean of `steps` over the last `window` episodes. Throws on an empty log
// or a window larger than the log.
double mean_final_steps(std::span<const EpisodeRecord> episodes, int window = kDefaultWindow);

// (s_psp - s_ec) / s_ec * 100. Throws when s_ec <= 0.
double attenuation_rate(double s_psp, double s_ec);

// Base-2 entropy with 0 log 0 = 0.
double shannon_entropy(const Distribution4& d);

// H((p+q)/2) - (H(p) + H(q))/2, in bits.
double js_divergence(const Distribution4& p, const Distribution4& q);

std::array<std::size_t, kNumSymbols> symbol_counts(std::span<const EpisodeRecord> episodes,
                                                   int window,
                                                   std::optional<AgentId> agent = {});

// Emitted-symbol frequencies over the last `window` episodes, pooled across
// agents unless `agent` is given. Throws when nothing was emitted.
Distribution4 symbol_distribution(std::span<const EpisodeRecord> episodes, int window,
                                  std::optional<AgentId> agent = {});

}  // namespace commlab::analysis
