#include "geolatnet/distributions.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace geolatnet {

namespace {

constexpr double kSqrt2 = 1.41421356237309504880;
// log(2 pi sqrt(pi / 2))
const double kLogZConst = std::log(2.0 * kPi * std::sqrt(kPi / 2.0));
constexpr long kMaxProposals = 10'000'000;

// log(sinh(r)) for r > 0 without overflow.
double log_sinh(double r) { return r + std::log1p(-std::exp(-2.0 * r)) - std::log(2.0); }

}  // namespace

double erf(double x) noexcept { return std::erf(x); }

double hyp_normal_log_Z(double sigma) {
  if (!(sigma > 0.0)) throw DomainError("hyperbolic Normal dispersion must be positive");
  return kLogZConst + std::log(sigma) + 0.5 * sigma * sigma + std::log(erf(sigma / kSqrt2));
}

double hyp_normal_Z(double sigma) { return std::exp(hyp_normal_log_Z(sigma)); }

double hyp_normal_log_density(const DiskPoint& z, const HyperbolicNormalParams& p) {
  const double d = hyperbolic_distance(p.mu, z);
  return -hyp_normal_log_Z(p.sigma) - d * d / (2.0 * p.sigma * p.sigma);
}

double hyp_normal_acceptance_ratio(double r, double sigma) {
  // rho(r) / (M p(r | 2, sigma)); Z(sigma) and Gamma(2) sigma^2 cancel.
  const double s1 = sigma + 1.0;
  return std::exp(log_sinh(r) - std::log(r) - r * r / (2.0 * sigma * sigma) + r / sigma - 0.5 * s1 * s1);
}

DiskPoint sample_hyp_normal(const HyperbolicNormalParams& p, Rng& rng) {
  if (!(p.sigma > 0.0)) throw DomainError("hyperbolic Normal dispersion must be positive");
  const double lambda = conformal_factor(p.mu);
  for (long k = 0; k < kMaxProposals; ++k) {
    // Proposal location, uniform in the unit disk; only its direction is used.
    const double u = uniform01(rng);
    const double zeta = 2.0 * kPi * uniform01(rng);
    const double ax = std::sqrt(u) * std::cos(zeta);
    const double ay = std::sqrt(u) * std::sin(zeta);
    const double an = std::hypot(ax, ay);
    // Radial proposal r ~ Gamma(shape 2, scale sigma).
    const double r = -p.sigma * (std::log(uniform_open0(rng)) + std::log(uniform_open0(rng)));
    const double accept = uniform01(rng);
    if (an == 0.0 || !(r > 0.0)) continue;
    if (accept >= hyp_normal_acceptance_ratio(r, p.sigma)) continue;
    const double scale = r / (lambda * an);
    try {
      return exp_map(p.mu, Vec2{scale * ax, scale * ay});
    } catch (const DomainError&) {
      // Landed numerically on the boundary; treat as a rejection.
    }
  }
  throw SamplerError("hyperbolic Normal sampler exceeded 1e7 proposals (sigma = " + std::to_string(p.sigma) +
                     ")");
}

std::vector<DiskPoint> sample_hyp_normal(const HyperbolicNormalParams& p, std::size_t n, Rng& rng) {
  std::vector<DiskPoint> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) out.push_back(sample_hyp_normal(p, rng));
  return out;
}

double vmf_log_density(const SpherePoint& z, const VmfParams& p) {
  if (p.kappa < 0.0) throw DomainError("vMF concentration must be nonnegative");
  if (p.kappa == 0.0) return -std::log(4.0 * kPi);
  const double k = p.kappa;
  return std::log(k) - std::log(2.0 * kPi) - std::log(-std::expm1(-2.0 * k)) + k * (p.mu.dot(z) - 1.0);
}

SpherePoint sample_uniform_sphere(Rng& rng) {
  const double w = 2.0 * uniform01(rng) - 1.0;
  const double phi = 2.0 * kPi * uniform01(rng);
  const double s = std::sqrt(std::max(0.0, 1.0 - w * w));
  return SpherePoint(s * std::cos(phi), s * std::sin(phi), w);
}

SpherePoint sample_vmf(const VmfParams& p, Rng& rng) {
  if (p.kappa < 0.0) throw DomainError("vMF concentration must be nonnegative");
  if (p.kappa == 0.0) return sample_uniform_sphere(rng);

  // Wood's envelope constants for m = 3 (so (m - 1) = 2 and Beta(1, 1) = U(0, 1)).
  const double k = p.kappa;
  const double b = (-2.0 * k + std::sqrt(4.0 * k * k + 4.0)) / 2.0;
  const double x0 = (1.0 - b) / (1.0 + b);
  const double c = k * x0 + 2.0 * std::log(1.0 - x0 * x0);
  double w = 1.0;
  for (long it = 0;; ++it) {
    if (it >= kMaxProposals) throw SamplerError("vMF sampler exceeded 1e7 proposals");
    const double zb = uniform01(rng);
    w = (1.0 - (1.0 + b) * zb) / (1.0 - (1.0 - b) * zb);
    const double u = uniform_open0(rng);
    if (k * w + 2.0 * std::log(1.0 - x0 * w) - c >= std::log(u)) break;
  }
  const double phi = 2.0 * kPi * uniform01(rng);
  const double s = std::sqrt(std::max(0.0, 1.0 - w * w));
  const Vec3 e{s * std::cos(phi), s * std::sin(phi), w};

  // Householder reflection taking the north pole to mu.
  const Vec3& mu = p.mu.coords();
  const Vec3 h{-mu[0], -mu[1], 1.0 - mu[2]};
  const double hn2 = h[0] * h[0] + h[1] * h[1] + h[2] * h[2];
  if (hn2 < 1e-30) return SpherePoint(e);
  const double proj = 2.0 * (h[0] * e[0] + h[1] * e[1] + h[2] * e[2]) / hn2;
  return SpherePoint(e[0] - proj * h[0], e[1] - proj * h[1], e[2] - proj * h[2]);
}

std::vector<SpherePoint> sample_vmf(const VmfParams& p, std::size_t n, Rng& rng) {
  std::vector<SpherePoint> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) out.push_back(sample_vmf(p, rng));
  return out;
}

double gaussian_log_density(double x, const GaussianParams& p) {
  if (!(p.s > 0.0)) throw DomainError("Gaussian standard deviation must be positive");
  const double z = (x - p.m) / p.s;
  return -0.5 * std::log(2.0 * kPi) - std::log(p.s) - 0.5 * z * z;
}

}  // namespace geolatnet
