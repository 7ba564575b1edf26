#pragma once

#include <cmath>
#include <functional>
#include <numbers>
#include <string>

#include "geolatnet/geometry.hpp"
#include "geolatnet/random.hpp"

namespace testsupport {

using namespace geolatnet;

// Uniform in the Euclidean disk of radius rmax.
inline DiskPoint random_disk(Rng& rng, double rmax = 0.95) {
  const double r = rmax * std::sqrt(uniform01(rng));
  const double a = 2.0 * std::numbers::pi * uniform01(rng);
  return {r * std::cos(a), r * std::sin(a)};
}

inline SpherePoint random_sphere(Rng& rng) {
  return {standard_normal(rng), standard_normal(rng), standard_normal(rng)};
}

// Composite Simpson rule with n (even) panels.
inline double simpson(const std::function<double(double)>& f, double a, double b, int n = 20000) {
  const double h = (b - a) / n;
  double s = f(a) + f(b);
  for (int k = 1; k < n; ++k) s += f(a + k * h) * (k % 2 ? 4.0 : 2.0);
  return s * h / 3.0;
}

// Hyperboloid-model distance, independent of the disk formula.
inline double hyperboloid_distance(const DiskPoint& a, const DiskPoint& b) {
  const auto lift = [](const DiskPoint& p) {
    const double r2 = p.norm2();
    return std::array<double, 3>{(1 + r2) / (1 - r2), 2 * p.x() / (1 - r2), 2 * p.y() / (1 - r2)};
  };
  const auto x = lift(a), y = lift(b);
  const double minkowski = x[0] * y[0] - x[1] * y[1] - x[2] * y[2];
  return std::acosh(std::max(1.0, minkowski));
}

inline std::string data_path(const std::string& name) { return std::string(GEOLATNET_DATA_DIR) + "/" + name; }

}  // namespace testsupport
