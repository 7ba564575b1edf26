#include "kernels_impl.hpp"

namespace geolatnet::kernels::detail {

void disk_row_scalar(double xi, double yi, const double* xs, const double* ys, std::size_t n,
                     double* out) noexcept {
  const double ci = 1.0 - (xi * xi + yi * yi);
  for (std::size_t j = 0; j < n; ++j) {
    const double dx = xi - xs[j];
    const double dy = yi - ys[j];
    const double cj = 1.0 - (xs[j] * xs[j] + ys[j] * ys[j]);
    out[j] = 2.0 * (dx * dx + dy * dy) / (ci * cj);
  }
}

void sphere_row_scalar(double xi, double yi, double zi, const double* xs, const double* ys, const double* zs,
                       std::size_t n, double* out) noexcept {
  for (std::size_t j = 0; j < n; ++j) out[j] = xi * xs[j] + yi * ys[j] + zi * zs[j];
}

}  // namespace geolatnet::kernels::detail
