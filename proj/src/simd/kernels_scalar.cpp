#include <cmath>

#include "commlab/simd/kernels.hpp"

namespace commlab::simd {
namespace {

void axpy_scalar(double a, const double* x, double* y, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] += a * x[i];
}

double dot_scalar(const double* a, const double* b, std::size_t n) {
  double lane[4] = {0.0, 0.0, 0.0, 0.0};
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    for (std::size_t k = 0; k < 4; ++k) lane[k] += a[i + k] * b[i + k];
  }
  double sum = (lane[0] + lane[1]) + (lane[2] + lane[3]);
  for (; i < n; ++i) sum += a[i] * b[i];
  return sum;
}

void relu_scalar(const double* in, double* out, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) out[i] = in[i] > 0.0 ? in[i] : 0.0;
}

void relu_backward_scalar(const double* pre, double* grad, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) {
    if (!(pre[i] > 0.0)) grad[i] = 0.0;
  }
}

void adam_update_scalar(double* params, const double* grads, double* m, double* v,
                        std::size_t n, const AdamCoefficients& c) {
  const double one_minus_b1 = 1.0 - c.beta1;
  const double one_minus_b2 = 1.0 - c.beta2;
  for (std::size_t i = 0; i < n; ++i) {
    const double g = grads[i];
    m[i] = c.beta1 * m[i] + one_minus_b1 * g;
    v[i] = c.beta2 * v[i] + one_minus_b2 * (g * g);
    const double m_hat = m[i] / c.bias_correction1;
    const double v_hat = v[i] / c.bias_correction2;
    params[i] -= c.lr * m_hat / (std::sqrt(v_hat) + c.epsilon);
  }
}

constexpr KernelSet kScalar{
    "scalar",      &axpy_scalar,          &dot_scalar,
    &relu_scalar,  &relu_backward_scalar, &adam_update_scalar,
};

}  // namespace

const KernelSet& scalar_kernels() { return kScalar; }

}  // namespace commlab::simd
