#pragma once

#include <cstddef>
#include <cstdint>

#include "commlab/neural/adam.hpp"
#include "commlab/neural/mlp.hpp"
#include "commlab/rng.hpp"

namespace commlab::neural {

// A Q-network with its optimizer state and a lagged copy used for
// bootstrapped targets.
struct QHead {
  Mlp online;
  Mlp target;  // refreshed from `online` every `target_sync` updates
  AdamState adam;
  std::uint64_t updates = 0;

  static QHead create(std::size_t in, std::size_t hidden, std::size_t out, Rng& rng,
                      AdamParams hyper = {});

  // Network used on the right-hand side of the TD target. With
  // target_sync == 0 the online network bootstraps itself.
  const Mlp& bootstrap(int target_sync) const { return target_sync > 0 ? target : online; }

  void apply(const MlpGradients& grads, double lr, int target_sync);
};

}  // namespace commlab::neural
