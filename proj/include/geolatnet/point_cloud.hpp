#pragma once

#include <algorithm>
#include <cmath>
#include <span>
#include <vector>

#include "geolatnet/geometry.hpp"
#include "geolatnet/kernels.hpp"

namespace geolatnet {

// Structure-of-arrays copy of a latent configuration, laid out for the dyad
// kernels. Keeps the typed points alongside the raw coordinates.
template <class G>
class PointCloud;

template <>
class PointCloud<Hyperbolic> {
 public:
  PointCloud() = default;
  explicit PointCloud(std::span<const DiskPoint> pts) : xs_(pts.size()), ys_(pts.size()), pts_(pts.begin(), pts.end()) {
    for (std::size_t i = 0; i < pts.size(); ++i) set(i, pts[i]);
  }
  std::size_t size() const noexcept { return pts_.size(); }
  const DiskPoint& operator[](std::size_t i) const noexcept { return pts_[i]; }
  const std::vector<DiskPoint>& points() const noexcept { return pts_; }
  void set(std::size_t i, const DiskPoint& p) noexcept {
    pts_[i] = p;
    xs_[i] = p.x();
    ys_[i] = p.y();
  }
  // out[k] = d(p, z_{first + k}) for k < size() - first.
  void distances_from(const DiskPoint& p, std::size_t first, std::span<double> out,
                      const kernels::KernelSet& k = kernels::active_kernels()) const noexcept {
    const std::size_t n = size() - first;
    k.disk_row(p.x(), p.y(), xs_.data() + first, ys_.data() + first, n, out.data());
    for (std::size_t j = 0; j < n; ++j) out[j] = acosh1p(out[j]);
  }

 private:
  std::vector<double> xs_, ys_;
  std::vector<DiskPoint> pts_;
};

template <>
class PointCloud<Spherical> {
 public:
  PointCloud() = default;
  explicit PointCloud(std::span<const SpherePoint> pts)
      : xs_(pts.size()), ys_(pts.size()), zs_(pts.size()), pts_(pts.begin(), pts.end()) {
    for (std::size_t i = 0; i < pts.size(); ++i) set(i, pts[i]);
  }
  std::size_t size() const noexcept { return pts_.size(); }
  const SpherePoint& operator[](std::size_t i) const noexcept { return pts_[i]; }
  const std::vector<SpherePoint>& points() const noexcept { return pts_; }
  void set(std::size_t i, const SpherePoint& p) noexcept {
    pts_[i] = p;
    xs_[i] = p.x();
    ys_[i] = p.y();
    zs_[i] = p.z();
  }
  void distances_from(const SpherePoint& p, std::size_t first, std::span<double> out,
                      const kernels::KernelSet& k = kernels::active_kernels()) const noexcept {
    const std::size_t n = size() - first;
    k.sphere_row(p.x(), p.y(), p.z(), xs_.data() + first, ys_.data() + first, zs_.data() + first, n, out.data());
    for (std::size_t j = 0; j < n; ++j) out[j] = std::acos(std::clamp(out[j], -1.0, 1.0));
  }

 private:
  std::vector<double> xs_, ys_, zs_;
  std::vector<SpherePoint> pts_;
};

// Full symmetric distance matrix, row-major.
template <class G>
std::vector<double> distance_matrix(const PointCloud<G>& cloud) {
  const std::size_t n = cloud.size();
  std::vector<double> d(n * n, 0.0), row(n);
  for (std::size_t i = 0; i < n; ++i) {
    cloud.distances_from(cloud[i], i + 1, row);
    for (std::size_t j = i + 1; j < n; ++j) d[i * n + j] = d[j * n + i] = row[j - i - 1];
  }
  return d;
}

}  // namespace geolatnet
