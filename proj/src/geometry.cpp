#include "geolatnet/geometry.hpp"

#include <algorithm>
#include <limits>
#include <string>

namespace geolatnet {

std::string_view to_string(Geometry g) {
  return g == Geometry::hyperbolic ? "hyperbolic" : "spherical";
}

Geometry parse_geometry(std::string_view s) {
  if (s == "hyperbolic") return Geometry::hyperbolic;
  if (s == "spherical") return Geometry::spherical;
  throw ConfigError("unknown geometry '" + std::string(s) + "' (expected hyperbolic|spherical)");
}

bool DiskPoint::is_valid(double x, double y) noexcept {
  const double r = std::hypot(x, y);
  return std::isfinite(r) && r < 1.0 - kDiskBoundaryGuard;
}

DiskPoint::DiskPoint(double x, double y) : x_(x), y_(y) {
  if (!is_valid(x, y)) {
    throw DomainError("disk point (" + std::to_string(x) + ", " + std::to_string(y) +
                      ") is not strictly inside the unit disk");
  }
}

SpherePoint::SpherePoint(double x, double y, double z) {
  const double n = std::sqrt(x * x + y * y + z * z);
  if (!(n > 1e-300) || !std::isfinite(n)) throw DomainError("cannot normalize a zero vector onto the sphere");
  v_ = {x / n, y / n, z / n};
}

MoebiusIsometry MoebiusIsometry::make(std::complex<double> beta, DiskPoint z0, bool reflect) {
  const double m = std::abs(beta);
  if (std::abs(m - 1.0) > 1e-6) throw DomainError("Moebius rotation factor must have unit modulus");
  return {beta / m, z0, reflect};
}

std::array<Vec3, 3> SphereIsometry::matrix() const {
  const double c1 = std::cos(theta1), s1 = std::sin(theta1);
  const double c2 = std::cos(theta2), s2 = std::sin(theta2);
  const double c3 = std::cos(theta3), s3 = std::sin(theta3);
  // R2 * R1
  const std::array<Vec3, 3> r21{{{c2, s2 * s1, s2 * c1}, {0.0, c1, -s1}, {-s2, c2 * s1, c2 * c1}}};
  std::array<Vec3, 3> m{};
  // R3 * (R2 R1)
  for (int j = 0; j < 3; ++j) {
    m[0][j] = c3 * r21[0][j] - s3 * r21[1][j];
    m[1][j] = s3 * r21[0][j] + c3 * r21[1][j];
    m[2][j] = r21[2][j];
  }
  if (reflect) {
    for (int j = 0; j < 3; ++j) m[1][j] = -m[1][j];
  }
  return m;
}

double hyperbolic_distance(const DiskPoint& a, const DiskPoint& b) noexcept {
  const double dx = a.x() - b.x();
  const double dy = a.y() - b.y();
  const double q = 2.0 * (dx * dx + dy * dy) / ((1.0 - a.norm2()) * (1.0 - b.norm2()));
  return acosh1p(q);
}

// atan2(|u x v|, u.v) keeps full precision near 0 and pi, where acos of the
// dot product loses about half the digits.
double spherical_distance(const SpherePoint& u, const SpherePoint& v) noexcept {
  const Vec3& p = u.coords();
  const Vec3& q = v.coords();
  const double cx = p[1] * q[2] - p[2] * q[1];
  const double cy = p[2] * q[0] - p[0] * q[2];
  const double cz = p[0] * q[1] - p[1] * q[0];
  return std::atan2(std::sqrt(cx * cx + cy * cy + cz * cz), u.dot(v));
}

Vec2 hyperbolic_distance_gradient(const DiskPoint& a, const DiskPoint& b) noexcept {
  const double dx = a.x() - b.x();
  const double dy = a.y() - b.y();
  const double diff2 = dx * dx + dy * dy;
  const double ca = 1.0 - a.norm2();
  const double cb = 1.0 - b.norm2();
  const double q = 2.0 * diff2 / (ca * cb);
  if (acosh1p(q) < 1e-10) return {0.0, 0.0};
  // d/da acosh(1 + q) = q'(a) / sqrt(q (q + 2)),
  // q'(a) = (2 / cb) (2 (a - b) / ca + 2 a |a - b|^2 / ca^2).
  const double f = 2.0 / cb / std::sqrt(q * (q + 2.0));
  return {f * (2.0 * dx / ca + 2.0 * a.x() * diff2 / (ca * ca)), f * (2.0 * dy / ca + 2.0 * a.y() * diff2 / (ca * ca))};
}

Vec3 spherical_distance_gradient(const SpherePoint& u, const SpherePoint& v) noexcept {
  const double c = std::clamp(u.dot(v), -1.0, 1.0);
  const double s = std::sqrt(std::max(0.0, 1.0 - c * c));
  if (s < 1e-12) return {0.0, 0.0, 0.0};
  const Vec3& p = u.coords();
  const Vec3& q = v.coords();
  // -(v - c u) / sin d
  return {-(q[0] - c * p[0]) / s, -(q[1] - c * p[1]) / s, -(q[2] - c * p[2]) / s};
}

DiskPoint apply(const MoebiusIsometry& iso, const DiskPoint& z) {
  const std::complex<double> w = z.as_complex();
  const std::complex<double> z0 = iso.z0.as_complex();
  std::complex<double> h = iso.beta * (w - z0) / (1.0 - std::conj(z0) * w);
  if (iso.reflect) h = std::conj(h);
  return DiskPoint(h);
}

SpherePoint apply(const SphereIsometry& iso, const SpherePoint& u) {
  const auto m = iso.matrix();
  const Vec3& v = u.coords();
  Vec3 out{};
  for (int i = 0; i < 3; ++i) out[i] = m[i][0] * v[0] + m[i][1] * v[1] + m[i][2] * v[2];
  return SpherePoint(out);
}

DiskPoint mobius_add(const DiskPoint& x, const DiskPoint& y) {
  const double xy = x.x() * y.x() + x.y() * y.y();
  const double x2 = x.norm2();
  const double y2 = y.norm2();
  const double cx = 1.0 + 2.0 * xy + y2;
  const double cy = 1.0 - x2;
  const double den = 1.0 + 2.0 * xy + x2 * y2;
  return DiskPoint((cx * x.x() + cy * y.x()) / den, (cx * x.y() + cy * y.y()) / den);
}

DiskPoint negate(const DiskPoint& x) { return DiskPoint(-x.x(), -x.y()); }

DiskPoint exp_map(const DiskPoint& mu, const Vec2& v) {
  const double n = std::hypot(v[0], v[1]);
  if (n == 0.0) return mu;
  const double t = std::tanh(conformal_factor(mu) * n / 2.0) / n;
  return mobius_add(mu, DiskPoint(t * v[0], t * v[1]));
}

Vec2 log_map(const DiskPoint& mu, const DiskPoint& z) {
  const DiskPoint w = mobius_add(negate(mu), z);
  const double n = std::sqrt(w.norm2());
  if (n == 0.0) return {0.0, 0.0};
  const double s = 2.0 / conformal_factor(mu) * std::atanh(n) / n;
  return {s * w.x(), s * w.y()};
}

SpherePoint exp_map(const SpherePoint& u, const Vec3& v) {
  const double n = tangent_norm(u, v);
  if (n == 0.0) return u;
  const double c = std::cos(n), s = std::sin(n) / n;
  const Vec3& p = u.coords();
  return SpherePoint(c * p[0] + s * v[0], c * p[1] + s * v[1], c * p[2] + s * v[2]);
}

Vec3 log_map(const SpherePoint& u, const SpherePoint& w) {
  const double c = std::clamp(u.dot(w), -1.0, 1.0);
  const Vec3& p = u.coords();
  const Vec3& q = w.coords();
  Vec3 t{q[0] - c * p[0], q[1] - c * p[1], q[2] - c * p[2]};
  const double tn = std::sqrt(t[0] * t[0] + t[1] * t[1] + t[2] * t[2]);
  if (tn < 1e-300) return {0.0, 0.0, 0.0};
  // atan2 keeps precision near both 0 and pi.
  const double theta = std::atan2(tn, c);
  const double s = theta / tn;
  return {s * t[0], s * t[1], s * t[2]};
}

namespace {

template <class Point, class Tangent>
FrechetMean<Point> karcher_descent(std::span<const Point> points) {
  if (points.empty()) throw DomainError("Frechet mean of an empty point set");
  constexpr int kMaxIter = 500;
  constexpr double kTol = 1e-8;

  // Start from the best input point so the result is never worse than any input.
  Point m = points.front();
  double f = frechet_objective(m, points);
  for (const auto& p : points) {
    const double fp = frechet_objective(p, points);
    if (fp < f) {
      f = fp;
      m = p;
    }
  }

  FrechetMean<Point> out{m, f, 0, false};
  const double inv_n = 1.0 / static_cast<double>(points.size());
  for (int it = 1; it <= kMaxIter; ++it) {
    Tangent g{};
    for (const auto& p : points) {
      const Tangent l = log_map(m, p);
      for (std::size_t k = 0; k < g.size(); ++k) g[k] += inv_n * l[k];
    }
    double step = 1.0;
    Point cand = m;
    double fc = f;
    bool moved = false;
    for (int halvings = 0; halvings < 60; ++halvings) {
      Tangent v = g;
      for (auto& c : v) c *= step;
      if (tangent_norm(m, v) < kTol) break;
      try {
        cand = exp_map(m, v);
      } catch (const DomainError&) {
        step *= 0.5;
        continue;
      }
      fc = frechet_objective(cand, points);
      if (fc <= f) {
        moved = true;
        break;
      }
      step *= 0.5;
    }
    out.iterations = it;
    Tangent v = g;
    for (auto& c : v) c *= step;
    if (!moved || tangent_norm(m, v) < kTol) {
      out.converged = true;
      if (moved) {
        m = cand;
        f = fc;
      }
      break;
    }
    m = cand;
    f = fc;
  }
  out.point = m;
  out.objective = f;
  return out;
}

}  // namespace

FrechetMean<DiskPoint> frechet_mean(std::span<const DiskPoint> points) {
  return karcher_descent<DiskPoint, Vec2>(points);
}

FrechetMean<SpherePoint> frechet_mean(std::span<const SpherePoint> points) {
  return karcher_descent<SpherePoint, Vec3>(points);
}

}  // namespace geolatnet
