#include "geolatnet/identifiability.hpp"

#include <algorithm>
#include <deque>
#include <limits>
#include <numeric>

#include "geolatnet/errors.hpp"

namespace geolatnet {

AnchorRole role_of(const AnchorSpec& a, std::size_t node) noexcept {
  if (node == a.i1) return AnchorRole::i1;
  if (node == a.i2) return AnchorRole::i2;
  if (node == a.i3) return AnchorRole::i3;
  return AnchorRole::free;
}

MoebiusIsometry solve_hyperbolic_isometry(const DiskPoint& z1, const DiskPoint& z2, const DiskPoint& z3) {
  const double d = hyperbolic_distance(z1, z2);
  if (d < kAnchorDistanceTol) throw DegenerateAnchors("first two hyperbolic anchors coincide");
  const double ch = std::cosh(d);
  const double a = std::sqrt((ch - 1.0) / (1.0 + ch));
  const std::complex<double> w1 = z1.as_complex(), w2 = z2.as_complex();
  // h(z2) = a for h(z) = beta (z - z1) / (1 - conj(z1) z).
  const std::complex<double> beta = a * (1.0 - std::conj(w1) * w2) / (w2 - w1);
  MoebiusIsometry iso = MoebiusIsometry::make(beta, z1, false);
  const double im3 = apply(iso, z3).y();
  if (std::abs(im3) < kAnchorHalfPlaneTol)
    throw DegenerateAnchors("third hyperbolic anchor lies on the geodesic through the first two");
  iso.reflect = im3 < 0.0;
  return iso;
}

SphereIsometry solve_sphere_isometry(const SpherePoint& u1, const SpherePoint& u2, const SpherePoint& u3) {
  const double d12 = spherical_distance(u1, u2);
  if (d12 < kAnchorDistanceTol || d12 > kPi - kAnchorDistanceTol)
    throw DegenerateAnchors("first two spherical anchors are coincident or antipodal");

  SphereIsometry iso;
  // Quadrant-aware versions of the tangent relations for theta1..theta3.
  iso.theta1 = std::atan2(u1.y(), u1.z());
  const double s1 = std::sin(iso.theta1), c1 = std::cos(iso.theta1);
  iso.theta2 = std::atan2(-u1.x(), u1.y() * s1 + u1.z() * c1);
  const double s2 = std::sin(iso.theta2), c2 = std::cos(iso.theta2);
  const double num = u2.z() * s1 - u2.y() * c1;
  const double den = u2.x() * c2 + s2 * (u2.y() * s1 + u2.z() * c1);
  if (std::hypot(num, den) < kAnchorDistanceTol)
    throw DegenerateAnchors("second spherical anchor maps onto the pole");
  iso.theta3 = std::atan2(num, den);

  const double y3 = apply(iso, u3).y();
  if (std::abs(y3) < kAnchorHalfPlaneTol)
    throw DegenerateAnchors("third spherical anchor lies on the great circle through the first two");
  iso.reflect = y3 < 0.0;
  return iso;
}

DiskPoint canonical_first(Hyperbolic) { return DiskPoint{}; }
SpherePoint canonical_first(Spherical) { return SpherePoint{}; }
DiskPoint canonical_second(Hyperbolic, double t) { return DiskPoint(std::tanh(t / 2.0), 0.0); }
SpherePoint canonical_second(Spherical, double t) { return SpherePoint(std::sin(t), 0.0, std::cos(t)); }

template <class G>
LatentConfiguration<G> canonicalize(const LatentConfiguration<G>& cfg, const AnchorSpec& anchors) {
  const std::size_t n = cfg.z.size();
  if (anchors.i1 >= n || anchors.i2 >= n || anchors.i3 >= n || anchors.i1 == anchors.i2 ||
      anchors.i1 == anchors.i3 || anchors.i2 == anchors.i3)
    throw DegenerateAnchors("anchor indices must be distinct and in range");
  const auto& z = cfg.z;
  const auto iso = solve_isometry(z[anchors.i1], z[anchors.i2], z[anchors.i3]);
  LatentConfiguration<G> out = cfg;
  for (std::size_t i = 0; i < n; ++i) out.z[i] = apply(iso, z[i]);
  out.z[anchors.i1] = canonical_first(G{});
  out.z[anchors.i2] = canonical_second(G{}, distance(z[anchors.i1], z[anchors.i2]));
  out.theta.mu = apply(iso, cfg.theta.mu);
  return out;
}

template <class G>
bool satisfies_anchor_constraints(std::span<const typename G::Point> z, const AnchorSpec& a, double tol) {
  if (!(z[a.i1] == canonical_first(G{}))) return false;
  const auto& p2 = z[a.i2];
  if (!(std::abs(p2.y()) <= tol && p2.x() > 0.0)) return false;
  return z[a.i3].y() > 0.0;
}

namespace {

std::vector<std::size_t> degree_order(const Network& y) {
  std::vector<std::size_t> order(y.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return y.degree(a) > y.degree(b); });
  return order;
}

std::vector<std::size_t> bfs_hops(const Network& y, std::size_t src) {
  constexpr auto kInf = std::numeric_limits<std::size_t>::max();
  std::vector<std::size_t> d(y.size(), kInf);
  std::deque<std::size_t> q{src};
  d[src] = 0;
  while (!q.empty()) {
    const std::size_t u = q.front();
    q.pop_front();
    const auto r = y.row(u);
    for (std::size_t v = 0; v < y.size(); ++v) {
      if (r[v] && d[v] == kInf) {
        d[v] = d[u] + 1;
        q.push_back(v);
      }
    }
  }
  return d;
}

}  // namespace

AnchorSpec select_anchors(const Network& y) {
  if (y.size() < 3) throw TooFewNodes("anchor selection needs at least 3 nodes");
  const auto order = degree_order(y);
  AnchorSpec a;
  a.i1 = order[0];
  const auto hops = bfs_hops(y, a.i1);
  auto far = std::find_if(order.begin() + 1, order.end(), [&](std::size_t v) { return hops[v] >= 2; });
  a.i2 = far != order.end() ? *far : order[1];
  a.i3 = *std::find_if(order.begin() + 1, order.end(), [&](std::size_t v) { return v != a.i2; });
  return a;
}

std::vector<AnchorSpec> anchor_candidates(const Network& y, std::size_t max_candidates) {
  std::vector<AnchorSpec> out{select_anchors(y)};
  const auto order = degree_order(y);
  for (std::size_t a : order)
    for (std::size_t b : order)
      for (std::size_t c : order) {
        if (out.size() >= max_candidates) return out;
        if (a == b || a == c || b == c) continue;
        const AnchorSpec s{a, b, c};
        if (s != out.front()) out.push_back(s);
      }
  return out;
}

template <class G>
std::pair<AnchorSpec, LatentConfiguration<G>> canonicalize_with_fallback(const Network& y,
                                                                          const LatentConfiguration<G>& cfg) {
  for (const auto& a : anchor_candidates(y)) {
    try {
      return {a, canonicalize(cfg, a)};
    } catch (const DegenerateAnchors&) {
    }
  }
  throw DegenerateAnchors("no non-degenerate anchor triple found for this configuration");
}

Parameterization constrained_degrees_of_freedom(Geometry g, AnchorRole role) {
  switch (role) {
    case AnchorRole::i1:
      return {0, g == Geometry::hyperbolic ? "fixed at the origin" : "fixed at the north pole (0,0,1)"};
    case AnchorRole::i2:
      if (g == Geometry::hyperbolic) return {1, "a + 0i on the positive real axis, a in (0,1)", 0.0, 1.0};
      return {1, "(a,0,b) on the x-z great circle with a > 0; polar angle in (0,pi)", 0.0, kPi};
    case AnchorRole::i3:
      return {2, "second coordinate > 0", 0.0, 0.0, true};
    case AnchorRole::free:
      break;
  }
  return {2, "unconstrained"};
}

#define GEOLATNET_INSTANTIATE(G)                                                                           \
  template LatentConfiguration<G> canonicalize<G>(const LatentConfiguration<G>&, const AnchorSpec&);      \
  template bool satisfies_anchor_constraints<G>(std::span<const typename G::Point>, const AnchorSpec&,    \
                                                double);                                                  \
  template std::pair<AnchorSpec, LatentConfiguration<G>> canonicalize_with_fallback<G>(                   \
      const Network&, const LatentConfiguration<G>&);

GEOLATNET_INSTANTIATE(Hyperbolic)
GEOLATNET_INSTANTIATE(Spherical)

#undef GEOLATNET_INSTANTIATE

}  // namespace geolatnet
