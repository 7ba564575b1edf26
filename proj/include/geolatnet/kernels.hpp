#pragma once

// Data-parallel inner loops over one node's dyads. Every kernel has a scalar
// reference implementation; vector variants are selected at runtime and must
// reproduce the reference to the last bit (no FMA contraction on either side).

#include <cstddef>
#include <string_view>

namespace geolatnet::kernels {

// out[j] = 2 |z_i - z_j|^2 / ((1 - |z_i|^2)(1 - |z_j|^2)), so that the
// hyperbolic distance is acosh(1 + out[j]).
using DiskRowFn = void (*)(double xi, double yi, const double* xs, const double* ys, std::size_t n,
                           double* out) noexcept;

// out[j] = <u_i, u_j>
using SphereRowFn = void (*)(double xi, double yi, double zi, const double* xs, const double* ys,
                             const double* zs, std::size_t n, double* out) noexcept;

enum class Isa { scalar, avx2 };

struct KernelSet {
  Isa isa;
  std::string_view name;
  DiskRowFn disk_row;
  SphereRowFn sphere_row;
};

const KernelSet& scalar_kernels() noexcept;

// nullptr unless the AVX2 variant was compiled in and the CPU supports it.
const KernelSet* avx2_kernels() noexcept;

// Best available set, chosen once. GEOLATNET_SIMD=scalar forces the reference.
const KernelSet& active_kernels() noexcept;

}  // namespace geolatnet::kernels
