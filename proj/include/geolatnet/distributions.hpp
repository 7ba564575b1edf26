#pragma once

// Densities and samplers: the maximum-entropy (Riemannian) Normal on the
// Poincare disk, the von Mises-Fisher distribution on S^2 and the scalar
// Gaussian used for the base rate.

#include <cstddef>
#include <vector>

#include "geolatnet/geometry.hpp"
#include "geolatnet/random.hpp"

namespace geolatnet {

struct HyperbolicNormalParams {
  DiskPoint mu{};
  double sigma = 1.0;
};

struct VmfParams {
  SpherePoint mu{};
  double kappa = 0.0;
};

struct GaussianParams {
  double m = 0.0;
  double s = 1.0;
};

inline constexpr double kPi = 3.14159265358979323846;

double erf(double x) noexcept;

// Normalizing constant of the hyperbolic Normal for d=2.
double hyp_normal_Z(double sigma);
double hyp_normal_log_Z(double sigma);

double hyp_normal_log_density(const DiskPoint& z, const HyperbolicNormalParams& p);

// Proposal/target ratio of the rejection sampler for a proposed geodesic
// radius r; bounded by 1 for a valid envelope.
double hyp_normal_acceptance_ratio(double r, double sigma);

// Rejection sampler with a Gamma(2, sigma) radial proposal. Throws
// SamplerError when 1e7 consecutive proposals are rejected.
DiskPoint sample_hyp_normal(const HyperbolicNormalParams& p, Rng& rng);
std::vector<DiskPoint> sample_hyp_normal(const HyperbolicNormalParams& p, std::size_t n, Rng& rng);

double vmf_log_density(const SpherePoint& z, const VmfParams& p);

// Wood (1994) rejection sampler, specialised to S^2.
SpherePoint sample_vmf(const VmfParams& p, Rng& rng);
std::vector<SpherePoint> sample_vmf(const VmfParams& p, std::size_t n, Rng& rng);

SpherePoint sample_uniform_sphere(Rng& rng);

double gaussian_log_density(double x, const GaussianParams& p);

// Geometry-generic aliases used by the model and samplers.
inline double latent_log_density(const DiskPoint& z, const HyperbolicNormalParams& p) {
  return hyp_normal_log_density(z, p);
}
inline double latent_log_density(const SpherePoint& z, const VmfParams& p) { return vmf_log_density(z, p); }
inline DiskPoint sample_latent(const HyperbolicNormalParams& p, Rng& rng) { return sample_hyp_normal(p, rng); }
inline SpherePoint sample_latent(const VmfParams& p, Rng& rng) { return sample_vmf(p, rng); }

}  // namespace geolatnet
