#include "commlab/neural/adam.hpp"

#include <cmath>
#include <stdexcept>

#include "commlab/simd/kernels.hpp"

namespace commlab::neural {

void adam_step(Mlp& net, const MlpGradients& grads, AdamState& state, double lr) {
  if (grads.shape != net.shape() || state.shape != net.shape()) {
    throw std::invalid_argument("adam_step: shape mismatch");
  }
  state.t += 1;
  const auto t = static_cast<double>(state.t);
  const simd::AdamCoefficients c{
      lr,
      state.hyper.beta1,
      state.hyper.beta2,
      state.hyper.epsilon,
      1.0 - std::pow(state.hyper.beta1, t),
      1.0 - std::pow(state.hyper.beta2, t),
  };
  auto params = net.mutable_parameters();
  simd::active().adam_update(params.data(), grads.values.data(), state.m.data(),
                             state.v.data(), params.size(), c);
}

}  // namespace commlab::neural
