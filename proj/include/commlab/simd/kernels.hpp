// Dense double-precision kernels used by the MLP and the Adam optimizer.
//
// Every kernel has a portable scalar reference and, where the target
// supports it, an AVX2 variant. The variant is chosen once at startup
// (`active()`); the COMMLAB_KERNELS environment variable ("scalar",
// "avx2") overrides the CPU probe.
//
// All variants of a kernel produce bit-identical results. Elementwise
// kernels perform the same IEEE operations in the same order, and `dot`
// accumulates into four interleaved partial sums in both the scalar and
// vector code, so training output does not depend on which variant ran.
#pragma once

#include <cstddef>
#include <span>
#include <string_view>

namespace commlab::simd {

struct AdamCoefficients {
  double lr;
  double beta1;
  double beta2;
  double epsilon;
  double bias_correction1;  // 1 - beta1^t
  double bias_correction2;  // 1 - beta2^t
};

struct KernelSet {
  std::string_view name;

  // y[i] += a * x[i]
  void (*axpy)(double a, const double* x, double* y, std::size_t n);
  // sum_i a[i] * b[i], four-lane striped accumulation
  double (*dot)(const double* a, const double* b, std::size_t n);
  // out[i] = max(in[i], 0)
  void (*relu)(const double* in, double* out, std::size_t n);
  // grad[i] = pre[i] > 0 ? grad[i] : 0
  void (*relu_backward)(const double* pre, double* grad, std::size_t n);
  void (*adam_update)(double* params, const double* grads, double* m, double* v,
                      std::size_t n, const AdamCoefficients& c);
};

const KernelSet& scalar_kernels();

// nullptr when the build or the CPU lacks AVX2.
const KernelSet* avx2_kernels();

// The kernel set selected for this process.
const KernelSet& active();

// Convenience wrappers over `active()`.
inline void axpy(double a, std::span<const double> x, std::span<double> y) {
  active().axpy(a, x.data(), y.data(), y.size());
}
inline double dot(std::span<const double> a, std::span<const double> b) {
  return active().dot(a.data(), b.data(), a.size());
}

}  // namespace commlab::simd
