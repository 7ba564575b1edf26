#pragma once

// Anchor coordinates: fix one node at the origin/pole, keep a second on a
// one-parameter geodesic and a third in the upper half. This removes the
// isometry non-identifiability of the likelihood.

#include <cstddef>
#include <string_view>
#include <vector>

#include "geolatnet/geometry.hpp"
#include "geolatnet/model.hpp"
#include "geolatnet/network.hpp"

namespace geolatnet {

struct AnchorSpec {
  std::size_t i1 = 0;
  std::size_t i2 = 1;
  std::size_t i3 = 2;

  friend bool operator==(const AnchorSpec&, const AnchorSpec&) = default;
};

enum class AnchorRole { i1, i2, i3, free };

AnchorRole role_of(const AnchorSpec& anchors, std::size_t node) noexcept;

// Distance below which two anchors are treated as coincident.
inline constexpr double kAnchorDistanceTol = 1e-10;
// |second coordinate| of the third anchor's image below which reflection is undefined.
inline constexpr double kAnchorHalfPlaneTol = 1e-12;

// Maps z1 -> 0, z2 -> (a, 0) with a > 0 and z3 into the upper half disk.
MoebiusIsometry solve_hyperbolic_isometry(const DiskPoint& z1, const DiskPoint& z2, const DiskPoint& z3);

// Maps u1 -> (0,0,1), u2 -> (a,0,b) with a > 0 and u3 to positive second coordinate.
SphereIsometry solve_sphere_isometry(const SpherePoint& u1, const SpherePoint& u2, const SpherePoint& u3);

inline auto solve_isometry(const DiskPoint& a, const DiskPoint& b, const DiskPoint& c) {
  return solve_hyperbolic_isometry(a, b, c);
}
inline auto solve_isometry(const SpherePoint& a, const SpherePoint& b, const SpherePoint& c) {
  return solve_sphere_isometry(a, b, c);
}

// Exact canonical positions: the first anchor, and the second anchor for a
// given geodesic distance t > 0 from the first.
DiskPoint canonical_first(Hyperbolic);
SpherePoint canonical_first(Spherical);
DiskPoint canonical_second(Hyperbolic, double t);
SpherePoint canonical_second(Spherical, double t);

// Applies the solved isometry to every point and to theta_z's mean. Snaps the
// first two anchors onto their exact canonical positions.
template <class G>
LatentConfiguration<G> canonicalize(const LatentConfiguration<G>& cfg, const AnchorSpec& anchors);

// True when the three anchor postconditions hold (tolerance on the 1-dof curve).
template <class G>
bool satisfies_anchor_constraints(std::span<const typename G::Point> z, const AnchorSpec& anchors,
                                  double tol = 1e-12);

// i1: highest degree; i2: highest degree at graph distance >= 2 from i1 when
// one exists (else next highest); i3: highest remaining. Ties by lowest index.
AnchorSpec select_anchors(const Network& y);

// select_anchors() first, then the remaining triples in degree order; used
// when the preferred triple is degenerate for a given configuration.
std::vector<AnchorSpec> anchor_candidates(const Network& y, std::size_t max_candidates = 64);

// Picks the first candidate triple whose isometry solves for `z`, and returns
// it together with the canonicalized configuration.
template <class G>
std::pair<AnchorSpec, LatentConfiguration<G>> canonicalize_with_fallback(const Network& y,
                                                                          const LatentConfiguration<G>& cfg);

struct Parameterization {
  std::size_t dimension = 0;
  std::string_view description;
  double lower = 0.0;  // bounds of the single free coordinate when dimension == 1
  double upper = 0.0;
  bool half_space = false;  // second coordinate restricted to > 0
};

Parameterization constrained_degrees_of_freedom(Geometry g, AnchorRole role);

}  // namespace geolatnet
