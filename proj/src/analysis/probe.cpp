#include "commlab/analysis/probe.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <set>
#include <stdexcept>

#include "commlab/rng.hpp"

namespace commlab::analysis {

ProbeDataset probe_dataset(std::span<const EpisodeRecord> episodes, int window) {
  if (window < 1 || static_cast<std::size_t>(window) > episodes.size()) {
    throw std::invalid_argument("probe_dataset: window exceeds episode count");
  }
  ProbeDataset data;
  for (const auto& e : episodes.last(static_cast<std::size_t>(window))) {
    for (const auto& ev : e.symbols) {
      data.push_back({static_cast<int>(ev.symbol), static_cast<int>(ev.context), e.episode});
    }
  }
  return data;
}

double probe_accuracy(const ProbeDataset& data, std::uint64_t split_seed,
                      double train_fraction) {
  if (data.empty()) throw std::invalid_argument("probe_accuracy: empty dataset");
  if (!(train_fraction > 0.0 && train_fraction < 1.0)) {
    throw std::invalid_argument("probe_accuracy: train_fraction must lie in (0, 1)");
  }
  std::set<int> episode_set;
  for (const auto& s : data) {
    if (s.symbol < 0 || s.symbol >= 4 || s.context < 0 || s.context >= 4) {
      throw std::invalid_argument("probe_accuracy: symbol or context out of range");
    }
    episode_set.insert(s.episode);
  }
  std::vector<int> episodes(episode_set.begin(), episode_set.end());
  Rng rng(split_seed, 0x9e3779b97f4a7c15ULL);
  for (std::size_t i = episodes.size(); i > 1; --i) {
    std::swap(episodes[i - 1], episodes[rng.index(i)]);
  }
  if (episodes.size() < 2) {
    throw std::invalid_argument("probe_accuracy: episode split leaves an empty side");
  }
  const auto n_train = std::clamp<std::size_t>(
      static_cast<std::size_t>(std::llround(train_fraction * static_cast<double>(episodes.size()))),
      1, episodes.size() - 1);
  const std::set<int> train(episodes.begin(), episodes.begin() + static_cast<long>(n_train));

  std::array<std::array<std::size_t, 4>, 4> table{};  // [symbol][context]
  std::array<std::size_t, 4> context_totals{};
  for (const auto& s : data) {
    if (!train.contains(s.episode)) continue;
    ++table[s.symbol][s.context];
    ++context_totals[s.context];
  }
  const auto majority = [](const std::array<std::size_t, 4>& counts) {
    return static_cast<int>(std::max_element(counts.begin(), counts.end()) - counts.begin());
  };
  const int global = majority(context_totals);
  std::array<int, 4> predict{};
  for (int sym = 0; sym < 4; ++sym) {
    std::size_t seen = 0;
    for (auto c : table[sym]) seen += c;
    predict[sym] = seen == 0 ? global : majority(table[sym]);
  }

  std::size_t correct = 0;
  std::size_t total = 0;
  for (const auto& s : data) {
    if (train.contains(s.episode)) continue;
    ++total;
    if (predict[s.symbol] == s.context) ++correct;
  }
  return static_cast<double>(correct) / static_cast<double>(total);
}

}  // namespace commlab::analysis
