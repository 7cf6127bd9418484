#include "commlab/neural/qhead.hpp"

namespace commlab::neural {

QHead QHead::create(std::size_t in, std::size_t hidden, std::size_t out, Rng& rng,
                    AdamParams hyper) {
  Mlp net = Mlp::init(in, hidden, out, rng);
  AdamState adam(net.shape(), hyper);
  Mlp copy = net;
  return QHead{std::move(net), std::move(copy), std::move(adam), 0};
}

void QHead::apply(const MlpGradients& grads, double lr, int target_sync) {
  adam_step(online, grads, adam, lr);
  ++updates;
  if (target_sync > 0 && updates % static_cast<std::uint64_t>(target_sync) == 0) {
    target = online;
  }
}

}  // namespace commlab::neural
