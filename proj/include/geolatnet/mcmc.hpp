#pragma once

// Metropolis-within-Gibbs sampler over (alpha, Z) in the anchor frame, with
// optional updates of theta_z and of the alpha-prior parameters.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "geolatnet/identifiability.hpp"
#include "geolatnet/init.hpp"
#include "geolatnet/model.hpp"
#include "geolatnet/network.hpp"
#include "geolatnet/point_cloud.hpp"
#include "geolatnet/random.hpp"

namespace geolatnet {

struct McmcConfig {
  std::size_t iterations = 10000;
  std::size_t thin = 1;
  std::uint64_t seed = 1;
  double alpha_step = 0.5;
  // Hyperbolic: dispersion of the hyperbolic Normal proposal. Spherical: the
  // vMF proposal uses kappa = 1 / latent_step^2. Also the sd of the second
  // anchor's walk along its geodesic.
  double latent_step = 1.0;
  double theta_step = 0.1;
  double prior_param_step = 0.1;
  PriorSpec priors{};
  bool update_prior_params = false;
  bool update_theta_z = false;
  // Fixed (or starting) theta_z scale: sigma on the disk, kappa on the sphere.
  double latent_sigma = 1.3;
  double latent_kappa = 2.5;
  // When false the chain targets the prior alone.
  bool include_likelihood = true;
  // Recompute the log posterior from scratch every k sweeps and throw
  // SamplerError on a mismatch above 1e-8; 0 disables.
  std::size_t self_check_every = 0;
  std::optional<AnchorSpec> anchors;
  MdsOptions mds{};

  // Throws ConfigError on out-of-range settings.
  void validate() const;
};

struct AcceptanceRates {
  double alpha = 0.0;
  double latent = 0.0;  // free nodes and the third anchor
  double anchor = 0.0;  // second anchor's 1-dof walk
  double theta = 0.0;
  double prior_params = 0.0;
};

template <class G>
struct McmcTrace {
  using Point = typename G::Point;
  std::vector<std::size_t> iterations;  // 1-based sweep index of each stored sample
  std::vector<double> alpha_samples;
  std::vector<double> loglik_samples;
  std::vector<std::vector<Point>> z_samples;
  std::vector<LatentParams<G>> theta_samples;
  std::vector<GaussianParams> prior_param_samples;
  AcceptanceRates acceptance{};
  AnchorSpec anchors{};
  LatentConfiguration<G> initial{};
  double init_stress = 0.0;

  std::size_t size() const noexcept { return alpha_samples.size(); }
};

template <class G>
class McmcChain {
 public:
  using Point = typename G::Point;

  McmcChain(const Network& y, LatentConfiguration<G> start, const AnchorSpec& anchors, const McmcConfig& cfg,
            Rng rng);

  bool mh_update_alpha();
  // i must not be the first anchor.
  bool mh_update_latent(std::size_t i);
  bool mh_update_theta();
  bool mh_update_prior_params();
  // One Gibbs sweep in the order: prior params, theta_z, alpha, nodes.
  void sweep();

  const LatentConfiguration<G>& state() const noexcept { return state_; }
  const AnchorSpec& anchors() const noexcept { return anchors_; }
  const GaussianParams& alpha_prior() const noexcept { return alpha_prior_; }
  double log_likelihood() const noexcept { return loglik_; }
  double log_posterior() const noexcept;
  double recompute_log_posterior() const;
  const McmcConfig& config() const noexcept { return cfg_; }
  Rng& rng() noexcept { return rng_; }

  struct Counts {
    std::size_t proposed = 0;
    std::size_t accepted = 0;
    double rate() const noexcept { return proposed ? static_cast<double>(accepted) / proposed : 0.0; }
  };
  Counts alpha_counts, latent_counts, anchor_counts, theta_counts, prior_counts;

 private:
  double likelihood_weight() const noexcept { return cfg_.include_likelihood ? 1.0 : 0.0; }
  double alpha_loglik(double alpha) const;
  double node_loglik(std::size_t i, std::span<const double> dist, double alpha) const;
  Point propose_free(const Point& current);
  std::optional<Point> propose_second_anchor(const Point& current);
  double alpha_prior_hyper_log_density(const GaussianParams& p) const;

  const Network& y_;
  McmcConfig cfg_;
  AnchorSpec anchors_;
  LatentConfiguration<G> state_;
  GaussianParams alpha_prior_;
  PointCloud<G> cloud_;
  std::vector<double> dist_;  // row-major N x N
  std::vector<double> row_;
  double loglik_ = 0.0;
  double latent_prior_ = 0.0;
  Rng rng_;
};

// Initializes from the network (see starting_state) and runs cfg.iterations sweeps.
template <class G>
McmcTrace<G> run_mcmc(const Network& y, const McmcConfig& cfg);

// Runs from an explicit canonical start.
template <class G>
McmcTrace<G> run_mcmc(const Network& y, const LatentConfiguration<G>& start, const AnchorSpec& anchors,
                      const McmcConfig& cfg);

// Initial-positive-sequence estimate; at least 1, at most n.
double effective_sample_size(std::span<const double> samples);

}  // namespace geolatnet
