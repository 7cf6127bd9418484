#include "commlab/neural/mlp.hpp"

#include <cmath>
#include <stdexcept>

#include "commlab/simd/kernels.hpp"

namespace commlab::neural {
namespace {

MlpShape checked_shape(std::size_t in, std::size_t hidden, std::size_t out) {
  if (in == 0 || hidden == 0 || out == 0) {
    throw std::invalid_argument("Mlp dimensions must be positive");
  }
  return {in, hidden, out};
}

}  // namespace

Mlp::Mlp(MlpShape shape, std::vector<double> params)
    : shape_(shape), params_(std::move(params)) {}

Mlp Mlp::zeros(std::size_t in, std::size_t hidden, std::size_t out) {
  const MlpShape s = checked_shape(in, hidden, out);
  return Mlp(s, std::vector<double>(s.parameter_count(), 0.0));
}

Mlp Mlp::init(std::size_t in, std::size_t hidden, std::size_t out, Rng& rng) {
  const MlpShape s = checked_shape(in, hidden, out);
  std::vector<double> p(s.parameter_count(), 0.0);
  const double bound1 = 1.0 / std::sqrt(static_cast<double>(in));
  const double bound2 = 1.0 / std::sqrt(static_cast<double>(hidden));
  for (std::size_t i = 0; i < s.w1_size(); ++i) p[i] = rng.uniform(-bound1, bound1);
  for (std::size_t i = 0; i < s.hidden * s.out; ++i) {
    p[s.w2_offset() + i] = rng.uniform(-bound2, bound2);
  }
  return Mlp(s, std::move(p));
}

std::span<double> Mlp::mutable_parameters() {
  ++version_;
  return params_;
}

ForwardCache Mlp::forward(std::span<const double> input) const {
  if (input.size() != shape_.in) throw std::invalid_argument("Mlp::forward: input size mismatch");
  const auto& k = simd::active();
  ForwardCache c;
  c.shape = shape_;
  c.version = version_;
  c.input.assign(input.begin(), input.end());

  c.hidden_pre.assign(b1().begin(), b1().end());
  const double* w1p = params_.data();
  for (std::size_t i = 0; i < shape_.in; ++i) {
    k.axpy(input[i], w1p + i * shape_.hidden, c.hidden_pre.data(), shape_.hidden);
  }
  c.hidden.resize(shape_.hidden);
  k.relu(c.hidden_pre.data(), c.hidden.data(), shape_.hidden);

  c.output.assign(b2().begin(), b2().end());
  const double* w2p = params_.data() + shape_.w2_offset();
  for (std::size_t j = 0; j < shape_.hidden; ++j) {
    k.axpy(c.hidden[j], w2p + j * shape_.out, c.output.data(), shape_.out);
  }
  return c;
}

std::vector<double> Mlp::predict(std::span<const double> input) const {
  return forward(input).output;
}

void Mlp::backward(const ForwardCache& cache, std::span<const double> output_grad,
                   MlpGradients& grads) const {
  if (cache.shape != shape_ || grads.shape != shape_) {
    throw std::invalid_argument("Mlp::backward: shape mismatch");
  }
  if (cache.version != version_) {
    throw std::invalid_argument("Mlp::backward: stale forward cache");
  }
  if (output_grad.size() != shape_.out) {
    throw std::invalid_argument("Mlp::backward: output gradient size mismatch");
  }
  const auto& k = simd::active();
  double* g = grads.values.data();
  const double* w2p = params_.data() + shape_.w2_offset();

  k.axpy(1.0, output_grad.data(), g + shape_.b2_offset(), shape_.out);

  std::vector<double> dhidden(shape_.hidden);
  for (std::size_t j = 0; j < shape_.hidden; ++j) {
    k.axpy(cache.hidden[j], output_grad.data(), g + shape_.w2_offset() + j * shape_.out,
           shape_.out);
    dhidden[j] = k.dot(w2p + j * shape_.out, output_grad.data(), shape_.out);
  }
  k.relu_backward(cache.hidden_pre.data(), dhidden.data(), shape_.hidden);

  k.axpy(1.0, dhidden.data(), g + shape_.b1_offset(), shape_.hidden);
  for (std::size_t i = 0; i < shape_.in; ++i) {
    k.axpy(cache.input[i], dhidden.data(), g + i * shape_.hidden, shape_.hidden);
  }
}

}  // namespace commlab::neural
