#pragma once

#include <cstdint>
#include <vector>

#include "commlab/neural/mlp.hpp"

namespace commlab::neural {

struct AdamParams {
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
};

// Moment accumulators for one network, shaped like its parameters.
struct AdamState {
  MlpShape shape;
  std::vector<double> m;
  std::vector<double> v;
  std::uint64_t t = 0;
  AdamParams hyper;

  explicit AdamState(const MlpShape& s, AdamParams h = {})
      : shape(s), m(s.parameter_count(), 0.0), v(s.parameter_count(), 0.0), hyper(h) {}
};

// One bias-corrected Adam update of `net` in place; increments state.t.
// Throws std::invalid_argument on a shape mismatch.
void adam_step(Mlp& net, const MlpGradients& grads, AdamState& state, double lr);

}  // namespace commlab::neural
