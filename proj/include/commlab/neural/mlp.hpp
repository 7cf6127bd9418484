// Single-hidden-layer perceptron: out = W2 * relu(W1 * x + b1) + b2.
//
// Parameters live in one flat buffer laid out as [W1 | b1 | W2 | b2], with
// W1 stored input-major (in_dim rows of hidden values) and W2 hidden-major
// (hidden rows of out_dim values). Gradients use the same layout, which
// lets the optimizer treat every parameter uniformly.
#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "commlab/rng.hpp"

namespace commlab::neural {

struct MlpShape {
  std::size_t in = 0;
  std::size_t hidden = 0;
  std::size_t out = 0;

  std::size_t w1_size() const { return in * hidden; }
  std::size_t b1_offset() const { return w1_size(); }
  std::size_t w2_offset() const { return b1_offset() + hidden; }
  std::size_t b2_offset() const { return w2_offset() + hidden * out; }
  std::size_t parameter_count() const { return b2_offset() + out; }

  friend bool operator==(const MlpShape&, const MlpShape&) = default;
};

class Mlp;

// Intermediate values of one forward pass, consumed by `backward`.
struct ForwardCache {
  MlpShape shape;
  std::uint64_t version = 0;  // parameter version the pass ran against
  std::vector<double> input;
  std::vector<double> hidden_pre;
  std::vector<double> hidden;
  std::vector<double> output;
};

// Gradient of a scalar loss w.r.t. every parameter, in Mlp layout.
struct MlpGradients {
  MlpShape shape;
  std::vector<double> values;

  explicit MlpGradients(const MlpShape& s) : shape(s), values(s.parameter_count(), 0.0) {}
  void clear() { std::fill(values.begin(), values.end(), 0.0); }
};

class Mlp {
 public:
  // Weights uniform in [-1/sqrt(fan_in), 1/sqrt(fan_in)], biases zero.
  // Throws std::invalid_argument if any dimension is zero.
  static Mlp init(std::size_t in, std::size_t hidden, std::size_t out, Rng& rng);

  // All-zero parameters.
  static Mlp zeros(std::size_t in, std::size_t hidden, std::size_t out);

  const MlpShape& shape() const { return shape_; }
  std::uint64_t version() const { return version_; }

  std::span<const double> parameters() const { return params_; }
  // Mutable access bumps the version, invalidating outstanding caches.
  std::span<double> mutable_parameters();

  std::span<const double> w1() const { return {params_.data(), shape_.w1_size()}; }
  std::span<const double> b1() const { return {params_.data() + shape_.b1_offset(), shape_.hidden}; }
  std::span<const double> w2() const {
    return {params_.data() + shape_.w2_offset(), shape_.hidden * shape_.out};
  }
  std::span<const double> b2() const { return {params_.data() + shape_.b2_offset(), shape_.out}; }

  // Throws std::invalid_argument on an input of the wrong length.
  ForwardCache forward(std::span<const double> input) const;
  std::vector<double> predict(std::span<const double> input) const;

  // Accumulates (adds) dLoss/dParams for one sample into `grads`, given
  // dLoss/dOutput. Throws std::invalid_argument for a cache from another
  // network shape or from an older parameter version.
  void backward(const ForwardCache& cache, std::span<const double> output_grad,
                MlpGradients& grads) const;

  friend bool operator==(const Mlp& a, const Mlp& b) {
    return a.shape_ == b.shape_ && a.params_ == b.params_;
  }

 private:
  Mlp(MlpShape shape, std::vector<double> params);

  MlpShape shape_;
  std::vector<double> params_;
  std::uint64_t version_ = 0;
};

}  // namespace commlab::neural
