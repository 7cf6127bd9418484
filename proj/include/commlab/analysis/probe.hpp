// Probing classifier: how well does an emitted symbol predict the
// sender's situational context (its PSP quadrant label)?
#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "commlab/training.hpp"

namespace commlab::analysis {

struct ProbeSample {
  int symbol = 0;   // 0..3
  int context = 0;  // 0..3
  int episode = 0;  // split unit
};

using ProbeDataset = std::vector<ProbeSample>;

// Every emission in the last `window` episodes, both agents.
ProbeDataset probe_dataset(std::span<const EpisodeRecord> episodes, int window);

// Splits episodes (not samples) into train/test with a seeded shuffle
// (round(train_fraction * n) training episodes, at least one per side),
// fits symbol -> most frequent training context (ties to the lowest
// label; unseen symbols map to the global training majority), and
// returns held-out accuracy. Throws std::invalid_argument on an empty
// dataset, an out-of-range label, or fewer than two episodes.
double probe_accuracy(const ProbeDataset& data, std::uint64_t split_seed,
                      double train_fraction = 0.8);

}  // namespace commlab::analysis
