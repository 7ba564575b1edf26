#pragma once

#include <cstddef>

namespace geolatnet::kernels::detail {

void disk_row_scalar(double xi, double yi, const double* xs, const double* ys, std::size_t n,
                     double* out) noexcept;
void sphere_row_scalar(double xi, double yi, double zi, const double* xs, const double* ys, const double* zs,
                       std::size_t n, double* out) noexcept;

#if defined(GEOLATNET_HAVE_AVX2)
void disk_row_avx2(double xi, double yi, const double* xs, const double* ys, std::size_t n,
                   double* out) noexcept;
void sphere_row_avx2(double xi, double yi, double zi, const double* xs, const double* ys, const double* zs,
                     std::size_t n, double* out) noexcept;
#endif

}  // namespace geolatnet::kernels::detail
