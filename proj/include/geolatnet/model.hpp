#pragma once

// The latent space network model: logit(p_ij) = alpha - d(z_i, z_j), with
// z_i drawn from a geometry-specific Normal analogue.

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "geolatnet/distributions.hpp"
#include "geolatnet/geometry.hpp"
#include "geolatnet/network.hpp"
#include "geolatnet/point_cloud.hpp"
#include "geolatnet/random.hpp"

namespace geolatnet {

template <class G>
struct LatentParamsFor;
template <>
struct LatentParamsFor<Hyperbolic> {
  using type = HyperbolicNormalParams;
};
template <>
struct LatentParamsFor<Spherical> {
  using type = VmfParams;
};
template <class G>
using LatentParams = typename LatentParamsFor<G>::type;

template <class G>
struct LatentConfiguration {
  using Point = typename G::Point;
  std::vector<Point> z;
  double alpha = 0.0;
  LatentParams<G> theta{};
};

// Hyperparameters of the priors on theta_z.
struct HyperbolicThetaPrior {
  double radius = 1.0;     // mu uniform on the hyperbolic disc of this radius about the origin
  double sigma_max = 5.0;  // sigma uniform on (0, sigma_max]
};

struct SphericalThetaPrior {
  double kappa_scale = 10.0;  // kappa ~ Gamma(shape 1, scale); mu uniform on S^2
};

struct PriorSpec {
  GaussianParams alpha_prior{0.0, 10.0};
  HyperbolicThetaPrior hyperbolic{};
  SphericalThetaPrior spherical{};
};

// Neumaier-compensated running sum.
class CompensatedSum {
 public:
  void add(double v) noexcept {
    const double t = sum_ + v;
    if (std::abs(sum_) >= std::abs(v))
      c_ += (sum_ - t) + v;
    else
      c_ += (v - t) + sum_;
    sum_ = t;
  }
  double value() const noexcept { return sum_ + c_; }

 private:
  double sum_ = 0.0;
  double c_ = 0.0;
};

// log(1 + e^x) without overflow.
inline double softplus(double x) noexcept { return x > 0.0 ? x + std::log1p(std::exp(-x)) : std::log1p(std::exp(x)); }

inline double edge_probability(double alpha, double dist) noexcept {
  const double eta = alpha - dist;
  if (eta >= 0.0) return 1.0 / (1.0 + std::exp(-eta));
  const double e = std::exp(eta);
  return e / (1.0 + e);
}

// y log p + (1 - y) log(1 - p) with logit(p) = eta.
inline double dyad_log_likelihood(bool y, double eta) noexcept { return (y ? eta : 0.0) - softplus(eta); }

// Sum over j of the dyad terms for one row, given the distances.
double row_log_likelihood(std::span<const std::uint8_t> y, std::span<const double> dist, double alpha,
                          std::size_t skip) noexcept;

template <class G>
double log_likelihood(const Network& y, const PointCloud<G>& cloud, double alpha);

template <class G>
double log_likelihood(const Network& y, const LatentConfiguration<G>& cfg) {
  return log_likelihood<G>(y, PointCloud<G>(cfg.z), cfg.alpha);
}

// Sum of log p(z_i | theta_z).
template <class G>
double log_latent_prior(std::span<const typename G::Point> z, const LatentParams<G>& theta);

double log_theta_prior(const HyperbolicNormalParams& theta, const PriorSpec& priors);
double log_theta_prior(const VmfParams& theta, const PriorSpec& priors);

// Unnormalized log posterior: likelihood + latent prior + alpha prior + theta prior.
template <class G>
double log_posterior(const Network& y, const LatentConfiguration<G>& cfg, const PriorSpec& priors);

template <class G>
struct SampledNetwork {
  Network y;
  LatentConfiguration<G> cfg;
};

template <class G>
SampledNetwork<G> sample_network(double alpha, const LatentParams<G>& theta, std::size_t n, Rng& rng);

// Resample only the edges for a fixed configuration.
template <class G>
Network sample_edges(const LatentConfiguration<G>& cfg, Rng& rng);

}  // namespace geolatnet
