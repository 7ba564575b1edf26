// Compiled with -mavx2 only; callers must check CPU support first.
#include <immintrin.h>

#include "kernels_impl.hpp"

namespace geolatnet::kernels::detail {

void disk_row_avx2(double xi, double yi, const double* xs, const double* ys, std::size_t n,
                   double* out) noexcept {
  const double ci_s = 1.0 - (xi * xi + yi * yi);
  const __m256d vxi = _mm256_set1_pd(xi);
  const __m256d vyi = _mm256_set1_pd(yi);
  const __m256d ci = _mm256_set1_pd(ci_s);
  const __m256d one = _mm256_set1_pd(1.0);
  const __m256d two = _mm256_set1_pd(2.0);
  std::size_t j = 0;
  for (; j + 4 <= n; j += 4) {
    const __m256d xj = _mm256_loadu_pd(xs + j);
    const __m256d yj = _mm256_loadu_pd(ys + j);
    const __m256d dx = _mm256_sub_pd(vxi, xj);
    const __m256d dy = _mm256_sub_pd(vyi, yj);
    const __m256d cj = _mm256_sub_pd(one, _mm256_add_pd(_mm256_mul_pd(xj, xj), _mm256_mul_pd(yj, yj)));
    const __m256d num = _mm256_mul_pd(two, _mm256_add_pd(_mm256_mul_pd(dx, dx), _mm256_mul_pd(dy, dy)));
    _mm256_storeu_pd(out + j, _mm256_div_pd(num, _mm256_mul_pd(ci, cj)));
  }
  for (; j < n; ++j) {
    const double dx = xi - xs[j];
    const double dy = yi - ys[j];
    const double cj = 1.0 - (xs[j] * xs[j] + ys[j] * ys[j]);
    out[j] = 2.0 * (dx * dx + dy * dy) / (ci_s * cj);
  }
}

void sphere_row_avx2(double xi, double yi, double zi, const double* xs, const double* ys, const double* zs,
                     std::size_t n, double* out) noexcept {
  const __m256d vxi = _mm256_set1_pd(xi);
  const __m256d vyi = _mm256_set1_pd(yi);
  const __m256d vzi = _mm256_set1_pd(zi);
  std::size_t j = 0;
  for (; j + 4 <= n; j += 4) {
    const __m256d xy = _mm256_add_pd(_mm256_mul_pd(vxi, _mm256_loadu_pd(xs + j)),
                                     _mm256_mul_pd(vyi, _mm256_loadu_pd(ys + j)));
    _mm256_storeu_pd(out + j, _mm256_add_pd(xy, _mm256_mul_pd(vzi, _mm256_loadu_pd(zs + j))));
  }
  for (; j < n; ++j) out[j] = xi * xs[j] + yi * ys[j] + zi * zs[j];
}

}  // namespace geolatnet::kernels::detail
