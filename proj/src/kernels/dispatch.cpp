#include <cstdlib>
#include <string_view>

#include "geolatnet/kernels.hpp"
#include "kernels_impl.hpp"

namespace geolatnet::kernels {

namespace {

const KernelSet kScalar{Isa::scalar, "scalar", &detail::disk_row_scalar, &detail::sphere_row_scalar};

#if defined(GEOLATNET_HAVE_AVX2)
const KernelSet kAvx2{Isa::avx2, "avx2", &detail::disk_row_avx2, &detail::sphere_row_avx2};
#endif

const KernelSet& select() noexcept {
  if (const char* env = std::getenv("GEOLATNET_SIMD"); env && std::string_view(env) == "scalar") return kScalar;
  if (const KernelSet* k = avx2_kernels()) return *k;
  return kScalar;
}

}  // namespace

const KernelSet& scalar_kernels() noexcept { return kScalar; }

const KernelSet* avx2_kernels() noexcept {
#if defined(GEOLATNET_HAVE_AVX2)
  static const bool supported = __builtin_cpu_supports("avx2");
  return supported ? &kAvx2 : nullptr;
#else
  return nullptr;
#endif
}

const KernelSet& active_kernels() noexcept {
  static const KernelSet& k = select();
  return k;
}

}  // namespace geolatnet::kernels
