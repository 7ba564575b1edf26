#include "geolatnet/model.hpp"

#include <limits>

#include "geolatnet/errors.hpp"

namespace geolatnet {

double row_log_likelihood(std::span<const std::uint8_t> y, std::span<const double> dist, double alpha,
                          std::size_t skip) noexcept {
  CompensatedSum s;
  for (std::size_t j = 0; j < dist.size(); ++j) {
    if (j == skip) continue;
    s.add(dyad_log_likelihood(y[j] != 0, alpha - dist[j]));
  }
  return s.value();
}

template <class G>
double log_likelihood(const Network& y, const PointCloud<G>& cloud, double alpha) {
  const std::size_t n = y.size();
  if (cloud.size() != n) throw DomainError("configuration size does not match the network");
  std::vector<double> row(n);
  CompensatedSum s;
  for (std::size_t i = 0; i + 1 < n; ++i) {
    cloud.distances_from(cloud[i], i + 1, row);
    const auto yi = y.row(i);
    for (std::size_t j = i + 1; j < n; ++j) s.add(dyad_log_likelihood(yi[j] != 0, alpha - row[j - i - 1]));
  }
  return s.value();
}

template <class G>
double log_latent_prior(std::span<const typename G::Point> z, const LatentParams<G>& theta) {
  CompensatedSum s;
  for (const auto& p : z) s.add(latent_log_density(p, theta));
  return s.value();
}

double log_theta_prior(const HyperbolicNormalParams& theta, const PriorSpec& priors) {
  const auto& hp = priors.hyperbolic;
  if (!(theta.sigma > 0.0) || theta.sigma > hp.sigma_max) return -std::numeric_limits<double>::infinity();
  const double r = hyperbolic_distance(DiskPoint{}, theta.mu);
  if (r > hp.radius) return -std::numeric_limits<double>::infinity();
  // Uniform area density on the hyperbolic disc: radial density sinh(r)/(cosh R - 1), uniform angle.
  return -std::log(2.0 * kPi * (std::cosh(hp.radius) - 1.0)) - std::log(hp.sigma_max);
}

double log_theta_prior(const VmfParams& theta, const PriorSpec& priors) {
  if (theta.kappa < 0.0) return -std::numeric_limits<double>::infinity();
  const double scale = priors.spherical.kappa_scale;
  return -std::log(4.0 * kPi) - std::log(scale) - theta.kappa / scale;
}

template <class G>
double log_posterior(const Network& y, const LatentConfiguration<G>& cfg, const PriorSpec& priors) {
  return log_likelihood(y, cfg) + log_latent_prior<G>(cfg.z, cfg.theta) +
         gaussian_log_density(cfg.alpha, priors.alpha_prior) + log_theta_prior(cfg.theta, priors);
}

template <class G>
Network sample_edges(const LatentConfiguration<G>& cfg, Rng& rng) {
  const std::size_t n = cfg.z.size();
  const PointCloud<G> cloud(cfg.z);
  Network y(n);
  std::vector<double> row(n);
  for (std::size_t i = 0; i + 1 < n; ++i) {
    cloud.distances_from(cloud[i], i + 1, row);
    for (std::size_t j = i + 1; j < n; ++j) {
      const double p = edge_probability(cfg.alpha, row[j - i - 1]);
      if (uniform01(rng) < p) y.set_edge(i, j, true);
    }
  }
  return y;
}

template <class G>
SampledNetwork<G> sample_network(double alpha, const LatentParams<G>& theta, std::size_t n, Rng& rng) {
  if (n < 2) throw TooFewNodes("sample_network needs at least 2 nodes");
  LatentConfiguration<G> cfg;
  cfg.alpha = alpha;
  cfg.theta = theta;
  cfg.z.reserve(n);
  for (std::size_t i = 0; i < n; ++i) cfg.z.push_back(sample_latent(theta, rng));
  Network y = sample_edges(cfg, rng);
  return {std::move(y), std::move(cfg)};
}

#define GEOLATNET_INSTANTIATE(G)                                                                            \
  template double log_likelihood<G>(const Network&, const PointCloud<G>&, double);                         \
  template double log_latent_prior<G>(std::span<const typename G::Point>, const LatentParams<G>&);          \
  template double log_posterior<G>(const Network&, const LatentConfiguration<G>&, const PriorSpec&);        \
  template Network sample_edges<G>(const LatentConfiguration<G>&, Rng&);                                   \
  template SampledNetwork<G> sample_network<G>(double, const LatentParams<G>&, std::size_t, Rng&);

GEOLATNET_INSTANTIATE(Hyperbolic)
GEOLATNET_INSTANTIATE(Spherical)

#undef GEOLATNET_INSTANTIATE

}  // namespace geolatnet
