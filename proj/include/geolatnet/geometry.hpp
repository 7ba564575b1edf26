#pragma once

// Manifold primitives for the two latent geometries: the Poincare disk (d=2)
// and the unit sphere S^2 embedded in R^3.

#include <array>
#include <cmath>
#include <complex>
#include <span>
#include <string_view>
#include <vector>

#include "geolatnet/errors.hpp"

namespace geolatnet {

enum class Geometry { hyperbolic, spherical };

std::string_view to_string(Geometry g);
Geometry parse_geometry(std::string_view s);

using Vec2 = std::array<double, 2>;
using Vec3 = std::array<double, 3>;

// Points with ||z|| >= 1 - kDiskBoundaryGuard are rejected.
inline constexpr double kDiskBoundaryGuard = 1e-12;

class DiskPoint {
 public:
  constexpr DiskPoint() = default;
  // Throws DomainError if the point is not strictly inside the guarded disk.
  DiskPoint(double x, double y);
  explicit DiskPoint(std::complex<double> z) : DiskPoint(z.real(), z.imag()) {}

  double x() const noexcept { return x_; }
  double y() const noexcept { return y_; }
  double norm2() const noexcept { return x_ * x_ + y_ * y_; }
  std::complex<double> as_complex() const noexcept { return {x_, y_}; }
  Vec2 coords() const noexcept { return {x_, y_}; }

  static bool is_valid(double x, double y) noexcept;

  friend bool operator==(const DiskPoint&, const DiskPoint&) = default;

 private:
  double x_ = 0.0;
  double y_ = 0.0;
};

class SpherePoint {
 public:
  // North pole.
  constexpr SpherePoint() = default;
  // Renormalizes; throws DomainError for a (near) zero vector.
  SpherePoint(double x, double y, double z);
  explicit SpherePoint(const Vec3& v) : SpherePoint(v[0], v[1], v[2]) {}

  double x() const noexcept { return v_[0]; }
  double y() const noexcept { return v_[1]; }
  double z() const noexcept { return v_[2]; }
  const Vec3& coords() const noexcept { return v_; }
  double dot(const SpherePoint& o) const noexcept {
    return v_[0] * o.v_[0] + v_[1] * o.v_[1] + v_[2] * o.v_[2];
  }

  friend bool operator==(const SpherePoint&, const SpherePoint&) = default;

 private:
  Vec3 v_{0.0, 0.0, 1.0};
};

// Moebius isometry of the disk: z -> beta (z - z0) / (1 - conj(z0) z), then
// complex conjugation when `reflect` is set.
struct MoebiusIsometry {
  std::complex<double> beta{1.0, 0.0};
  DiskPoint z0{};
  bool reflect = false;

  static MoebiusIsometry identity() { return {}; }
  // Normalizes beta onto the unit circle; throws if |beta| is far from 1.
  static MoebiusIsometry make(std::complex<double> beta, DiskPoint z0, bool reflect);
};

// Rotation R3(theta3) R2(theta2) R1(theta1) about the coordinate axes, followed
// by diag(1,-1,1) when `reflect` is set.
struct SphereIsometry {
  double theta1 = 0.0;
  double theta2 = 0.0;
  double theta3 = 0.0;
  bool reflect = false;

  std::array<Vec3, 3> matrix() const;
};

// --- distances -------------------------------------------------------------

// arccosh(1 + q) computed as log1p(q + sqrt(q (q + 2))), accurate for small q.
inline double acosh1p(double q) noexcept { return std::log1p(q + std::sqrt(q * (q + 2.0))); }

double hyperbolic_distance(const DiskPoint& a, const DiskPoint& b) noexcept;
// Angle between the unit vectors, in [0, pi].
double spherical_distance(const SpherePoint& u, const SpherePoint& v) noexcept;

inline double distance(const DiskPoint& a, const DiskPoint& b) noexcept {
  return hyperbolic_distance(a, b);
}
inline double distance(const SpherePoint& a, const SpherePoint& b) noexcept {
  return spherical_distance(a, b);
}

// Euclidean-coordinate gradient of d_H(a, b) with respect to a. Zero when the
// points are closer than 1e-10, where the direction is undefined.
Vec2 hyperbolic_distance_gradient(const DiskPoint& a, const DiskPoint& b) noexcept;

// Tangent-space gradient at u of d_S(u, v); zero at coincident/antipodal points.
Vec3 spherical_distance_gradient(const SpherePoint& u, const SpherePoint& v) noexcept;

// --- isometries ------------------------------------------------------------

DiskPoint apply(const MoebiusIsometry& iso, const DiskPoint& z);
SpherePoint apply(const SphereIsometry& iso, const SpherePoint& u);

inline DiskPoint apply_moebius(const MoebiusIsometry& iso, const DiskPoint& z) { return apply(iso, z); }
inline SpherePoint apply_sphere_isometry(const SphereIsometry& iso, const SpherePoint& u) {
  return apply(iso, u);
}

// --- Poincare disk gyro-structure and exp/log maps ---------------------------

inline double conformal_factor(const DiskPoint& mu) noexcept { return 2.0 / (1.0 - mu.norm2()); }

DiskPoint mobius_add(const DiskPoint& x, const DiskPoint& y);
DiskPoint negate(const DiskPoint& x);

DiskPoint exp_map(const DiskPoint& mu, const Vec2& v);
Vec2 log_map(const DiskPoint& mu, const DiskPoint& z);

// Riemannian norm of a tangent vector at mu.
inline double tangent_norm(const DiskPoint& mu, const Vec2& v) noexcept {
  return conformal_factor(mu) * std::hypot(v[0], v[1]);
}

// --- sphere exp/log maps ---------------------------------------------------

SpherePoint exp_map(const SpherePoint& u, const Vec3& v);
Vec3 log_map(const SpherePoint& u, const SpherePoint& w);

inline double tangent_norm(const SpherePoint&, const Vec3& v) noexcept {
  return std::sqrt(v[0] * v[0] + v[1] * v[1] + v[2] * v[2]);
}

// --- Frechet mean ----------------------------------------------------------

template <class Point>
struct FrechetMean {
  Point point;
  double objective = 0.0;  // mean squared geodesic distance at `point`
  int iterations = 0;
  bool converged = false;
};

FrechetMean<DiskPoint> frechet_mean(std::span<const DiskPoint> points);
FrechetMean<SpherePoint> frechet_mean(std::span<const SpherePoint> points);

template <class Point>
double frechet_objective(const Point& m, std::span<const Point> points) {
  double s = 0.0;
  for (const auto& p : points) {
    const double d = distance(m, p);
    s += d * d;
  }
  return s / static_cast<double>(points.size());
}

// Geometry traits used to write inference code once for both manifolds.
struct Hyperbolic {
  using Point = DiskPoint;
  using Tangent = Vec2;
  static constexpr Geometry tag = Geometry::hyperbolic;
  static constexpr std::size_t ambient_dim = 2;
};

struct Spherical {
  using Point = SpherePoint;
  using Tangent = Vec3;
  static constexpr Geometry tag = Geometry::spherical;
  static constexpr std::size_t ambient_dim = 3;
};

}  // namespace geolatnet
