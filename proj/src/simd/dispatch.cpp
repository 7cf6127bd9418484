#include <cstdlib>
#include <stdexcept>
#include <string>

#include "commlab/simd/kernels.hpp"

namespace commlab::simd {

#if defined(COMMLAB_WITH_AVX2)
namespace detail {
extern const KernelSet kAvx2;
}
#endif

const KernelSet* avx2_kernels() {
#if defined(COMMLAB_WITH_AVX2)
  static const bool supported = __builtin_cpu_supports("avx2");
  return supported ? &detail::kAvx2 : nullptr;
#else
  return nullptr;
#endif
}

namespace {

const KernelSet& select() {
  if (const char* forced = std::getenv("COMMLAB_KERNELS")) {
    const std::string name(forced);
    if (name == "scalar") return scalar_kernels();
    if (name == "avx2") {
      if (const KernelSet* k = avx2_kernels()) return *k;
      throw std::runtime_error("COMMLAB_KERNELS=avx2 but AVX2 is unavailable");
    }
    throw std::runtime_error("unknown COMMLAB_KERNELS value: " + name);
  }
  if (const KernelSet* k = avx2_kernels()) return *k;
  return scalar_kernels();
}

}  // namespace

const KernelSet& active() {
  static const KernelSet& chosen = select();
  return chosen;
}

}  // namespace commlab::simd
