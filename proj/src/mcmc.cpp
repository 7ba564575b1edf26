#include "geolatnet/mcmc.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <type_traits>

#include "geolatnet/errors.hpp"

namespace geolatnet {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

bool accept_log_ratio(double log_ratio, Rng& rng) {
  return std::log(uniform_open0(rng)) <= log_ratio;
}

DiskPoint symmetric_proposal(const DiskPoint& current, double step, Rng& rng) {
  if (step == 0.0) return current;
  return sample_hyp_normal({current, step}, rng);
}

SpherePoint symmetric_proposal(const SpherePoint& current, double step, Rng& rng) {
  if (step == 0.0) return current;
  return sample_vmf({current, 1.0 / (step * step)}, rng);
}

// Arc-length coordinate of the second anchor along its canonical geodesic.
double anchor_arc(const DiskPoint& p) { return 2.0 * std::atanh(p.x()); }
double anchor_arc(const SpherePoint& p) { return std::atan2(p.x(), p.z()); }
double anchor_arc_upper(Hyperbolic) { return std::numeric_limits<double>::infinity(); }
double anchor_arc_upper(Spherical) { return kPi; }

double theta_scale(const HyperbolicNormalParams& t) { return t.sigma; }
double theta_scale(const VmfParams& t) { return t.kappa; }
void set_theta_scale(HyperbolicNormalParams& t, double v) { t.sigma = v; }
void set_theta_scale(VmfParams& t, double v) { t.kappa = v; }

}  // namespace

void McmcConfig::validate() const {
  if (iterations < 1) throw ConfigError("iterations must be >= 1");
  if (thin < 1) throw ConfigError("thin must be >= 1");
  const auto positive = [](double v, const char* name) {
    if (!(v > 0.0) || !std::isfinite(v)) throw ConfigError(std::string(name) + " must be positive and finite");
  };
  positive(alpha_step, "alpha_step");
  positive(latent_step, "latent_step");
  positive(theta_step, "theta_step");
  positive(prior_param_step, "prior_param_step");
  positive(latent_sigma, "latent_sigma");
  if (!(latent_kappa >= 0.0) || !std::isfinite(latent_kappa)) throw ConfigError("latent_kappa must be >= 0");
  positive(priors.alpha_prior.s, "alpha_prior_sd");
  positive(priors.hyperbolic.radius, "mu_radius");
  positive(priors.hyperbolic.sigma_max, "sigma_max");
  positive(priors.spherical.kappa_scale, "kappa_scale");
  if (latent_sigma > priors.hyperbolic.sigma_max) throw ConfigError("latent_sigma exceeds sigma_max");
}

template <class G>
McmcChain<G>::McmcChain(const Network& y, LatentConfiguration<G> start, const AnchorSpec& anchors,
                        const McmcConfig& cfg, Rng rng)
    : y_(y),
      cfg_(cfg),
      anchors_(anchors),
      state_(std::move(start)),
      alpha_prior_(cfg.priors.alpha_prior),
      cloud_(state_.z),
      row_(y.size()),
      rng_(std::move(rng)) {
  const std::size_t n = y.size();
  if (state_.z.size() != n) throw DomainError("starting configuration size does not match the network");
  if (!satisfies_anchor_constraints<G>(state_.z, anchors_))
    throw DegenerateAnchors("starting configuration is not in canonical anchor form");
  dist_ = distance_matrix(cloud_);
  loglik_ = alpha_loglik(state_.alpha);
  latent_prior_ = log_latent_prior<G>(state_.z, state_.theta);
}

template <class G>
double McmcChain<G>::alpha_loglik(double alpha) const {
  if (!cfg_.include_likelihood) return 0.0;
  const std::size_t n = y_.size();
  CompensatedSum s;
  for (std::size_t i = 0; i + 1 < n; ++i) {
    const auto yi = y_.row(i);
    const double* di = dist_.data() + i * n;
    for (std::size_t j = i + 1; j < n; ++j) s.add(dyad_log_likelihood(yi[j] != 0, alpha - di[j]));
  }
  return s.value();
}

template <class G>
double McmcChain<G>::node_loglik(std::size_t i, std::span<const double> dist, double alpha) const {
  if (!cfg_.include_likelihood) return 0.0;
  return row_log_likelihood(y_.row(i), dist, alpha, i);
}

template <class G>
double McmcChain<G>::log_posterior() const noexcept {
  double lp = loglik_ + latent_prior_ + gaussian_log_density(state_.alpha, alpha_prior_) +
              log_theta_prior(state_.theta, cfg_.priors);
  if (cfg_.update_prior_params) lp += alpha_prior_hyper_log_density(alpha_prior_);
  return lp;
}

template <class G>
double McmcChain<G>::recompute_log_posterior() const {
  const double ll = cfg_.include_likelihood ? geolatnet::log_likelihood(y_, state_) : 0.0;
  double lp = ll + log_latent_prior<G>(state_.z, state_.theta) + gaussian_log_density(state_.alpha, alpha_prior_) +
              log_theta_prior(state_.theta, cfg_.priors);
  if (cfg_.update_prior_params) lp += alpha_prior_hyper_log_density(alpha_prior_);
  return lp;
}

template <class G>
double McmcChain<G>::alpha_prior_hyper_log_density(const GaussianParams& p) const {
  // m ~ N(0, 10), s ~ |N(0, 10)|.
  if (!(p.s > 0.0)) return kNegInf;
  return gaussian_log_density(p.m, {0.0, 10.0}) + std::log(2.0) + gaussian_log_density(p.s, {0.0, 10.0});
}

template <class G>
bool McmcChain<G>::mh_update_alpha() {
  ++alpha_counts.proposed;
  // Resynchronize the tracked likelihood once per sweep.
  loglik_ = alpha_loglik(state_.alpha);
  const double prop = state_.alpha + cfg_.alpha_step * standard_normal(rng_);
  const double ll_prop = alpha_loglik(prop);
  const double log_ratio = ll_prop - loglik_ + gaussian_log_density(prop, alpha_prior_) -
                           gaussian_log_density(state_.alpha, alpha_prior_);
  if (!accept_log_ratio(log_ratio, rng_)) return false;
  state_.alpha = prop;
  loglik_ = ll_prop;
  ++alpha_counts.accepted;
  return true;
}

template <class G>
typename McmcChain<G>::Point McmcChain<G>::propose_free(const Point& current) {
  return symmetric_proposal(current, cfg_.latent_step, rng_);
}

template <class G>
std::optional<typename McmcChain<G>::Point> McmcChain<G>::propose_second_anchor(const Point& current) {
  const double t = anchor_arc(current) + cfg_.latent_step * standard_normal(rng_);
  if (!(t > 0.0) || !(t < anchor_arc_upper(G{}))) return std::nullopt;
  if constexpr (std::is_same_v<G, Hyperbolic>) {
    if (!DiskPoint::is_valid(std::tanh(t / 2.0), 0.0)) return std::nullopt;
  }
  return canonical_second(G{}, t);
}

template <class G>
bool McmcChain<G>::mh_update_latent(std::size_t i) {
  const AnchorRole role = role_of(anchors_, i);
  if (role == AnchorRole::i1) throw DomainError("the first anchor is never updated");
  Counts& counts = role == AnchorRole::i2 ? anchor_counts : latent_counts;
  ++counts.proposed;

  const Point& current = state_.z[i];
  Point prop;
  if (role == AnchorRole::i2) {
    const auto p = propose_second_anchor(current);
    if (!p) return false;
    prop = *p;
  } else {
    prop = propose_free(current);
    if (role == AnchorRole::i3 && !(prop.y() > 0.0)) return false;
  }

  const std::size_t n = y_.size();
  cloud_.distances_from(prop, 0, row_);
  row_[i] = 0.0;
  const std::span<const double> old_row(dist_.data() + i * n, n);
  const double ll_new = node_loglik(i, row_, state_.alpha);
  const double ll_old = node_loglik(i, old_row, state_.alpha);
  const double lp_new = latent_log_density(prop, state_.theta);
  const double lp_old = latent_log_density(current, state_.theta);
  if (!accept_log_ratio(ll_new - ll_old + lp_new - lp_old, rng_)) return false;

  state_.z[i] = prop;
  cloud_.set(i, prop);
  for (std::size_t j = 0; j < n; ++j) dist_[i * n + j] = dist_[j * n + i] = row_[j];
  loglik_ += ll_new - ll_old;
  latent_prior_ += lp_new - lp_old;
  ++counts.accepted;
  return true;
}

template <class G>
bool McmcChain<G>::mh_update_theta() {
  ++theta_counts.proposed;
  LatentParams<G> prop = state_.theta;
  prop.mu = symmetric_proposal(state_.theta.mu, cfg_.theta_step, rng_);
  // Log-scale walk on the dispersion; the Jacobian is the scale ratio.
  const double scale = theta_scale(state_.theta);
  const double new_scale = scale * std::exp(cfg_.theta_step * standard_normal(rng_));
  set_theta_scale(prop, new_scale);
  const double prior_new = log_theta_prior(prop, cfg_.priors);
  if (prior_new == kNegInf) return false;
  const double lat_new = log_latent_prior<G>(state_.z, prop);
  const double log_ratio = lat_new - latent_prior_ + prior_new - log_theta_prior(state_.theta, cfg_.priors) +
                           std::log(new_scale) - std::log(scale);
  if (!accept_log_ratio(log_ratio, rng_)) return false;
  state_.theta = prop;
  latent_prior_ = lat_new;
  ++theta_counts.accepted;
  return true;
}

template <class G>
bool McmcChain<G>::mh_update_prior_params() {
  ++prior_counts.proposed;
  GaussianParams prop{alpha_prior_.m + cfg_.prior_param_step * standard_normal(rng_),
                      alpha_prior_.s * std::exp(cfg_.prior_param_step * standard_normal(rng_))};
  const double log_ratio = gaussian_log_density(state_.alpha, prop) + alpha_prior_hyper_log_density(prop) -
                           gaussian_log_density(state_.alpha, alpha_prior_) -
                           alpha_prior_hyper_log_density(alpha_prior_) + std::log(prop.s) - std::log(alpha_prior_.s);
  if (!accept_log_ratio(log_ratio, rng_)) return false;
  alpha_prior_ = prop;
  ++prior_counts.accepted;
  return true;
}

template <class G>
void McmcChain<G>::sweep() {
  if (cfg_.update_prior_params) mh_update_prior_params();
  if (cfg_.update_theta_z) mh_update_theta();
  mh_update_alpha();
  for (std::size_t i = 0; i < y_.size(); ++i)
    if (i != anchors_.i1) mh_update_latent(i);
}

template <class G>
McmcTrace<G> run_mcmc(const Network& y, const LatentConfiguration<G>& start, const AnchorSpec& anchors,
                      const McmcConfig& cfg) {
  cfg.validate();
  McmcChain<G> chain(y, start, anchors, cfg, derive_rng(cfg.seed, 1));
  McmcTrace<G> trace;
  trace.anchors = anchors;
  trace.initial = start;
  const std::size_t kept = cfg.iterations / cfg.thin;
  trace.iterations.reserve(kept);
  trace.alpha_samples.reserve(kept);
  trace.loglik_samples.reserve(kept);
  trace.z_samples.reserve(kept);
  for (std::size_t it = 1; it <= cfg.iterations; ++it) {
    chain.sweep();
    if (cfg.self_check_every && it % cfg.self_check_every == 0) {
      const double tracked = chain.log_posterior();
      const double fresh = chain.recompute_log_posterior();
      if (!(std::abs(tracked - fresh) <= 1e-8 * std::max(1.0, std::abs(fresh))))
        throw SamplerError("tracked log posterior " + std::to_string(tracked) + " drifted from recomputed " +
                           std::to_string(fresh) + " at sweep " + std::to_string(it));
    }
    if (it % cfg.thin == 0) {
      const auto& s = chain.state();
      trace.iterations.push_back(it);
      trace.alpha_samples.push_back(s.alpha);
      trace.loglik_samples.push_back(cfg.include_likelihood ? chain.log_likelihood() : log_likelihood(y, s));
      trace.z_samples.push_back(s.z);
      trace.theta_samples.push_back(s.theta);
      trace.prior_param_samples.push_back(chain.alpha_prior());
    }
  }
  trace.acceptance = {chain.alpha_counts.rate(), chain.latent_counts.rate(), chain.anchor_counts.rate(),
                      chain.theta_counts.rate(), chain.prior_counts.rate()};
  return trace;
}

template <class G>
McmcTrace<G> run_mcmc(const Network& y, const McmcConfig& cfg) {
  cfg.validate();
  LatentParams<G> theta;
  if constexpr (std::is_same_v<G, Hyperbolic>)
    theta.sigma = cfg.latent_sigma;
  else
    theta.kappa = cfg.latent_kappa;
  Rng init_rng = derive_rng(cfg.seed, 0);
  auto start = starting_state<G>(y, theta, cfg.anchors, init_rng, cfg.mds);
  auto trace = run_mcmc<G>(y, start.cfg, start.anchors, cfg);
  trace.init_stress = start.stress;
  return trace;
}

double effective_sample_size(std::span<const double> x) {
  const std::size_t n = x.size();
  if (n < 10) throw DomainError("effective_sample_size needs at least 10 samples");
  double mean = 0.0;
  for (double v : x) mean += v;
  mean /= static_cast<double>(n);
  const auto autocov = [&](std::size_t lag) {
    double s = 0.0;
    for (std::size_t t = 0; t + lag < n; ++t) s += (x[t] - mean) * (x[t + lag] - mean);
    return s / static_cast<double>(n);
  };
  const double c0 = autocov(0);
  if (!(c0 > 0.0)) return 1.0;
  // Geyer: sum consecutive autocorrelation pairs while the pair sums stay positive.
  double tau = -1.0;
  for (std::size_t k = 0; 2 * k + 1 < n; ++k) {
    const double pair = (autocov(2 * k) + autocov(2 * k + 1)) / c0;
    if (!(pair > 0.0)) break;
    tau += 2.0 * pair;
  }
  const double ess = static_cast<double>(n) / std::max(tau, 1.0 / static_cast<double>(n));
  return std::clamp(ess, 1.0, static_cast<double>(n));
}

#define GEOLATNET_INSTANTIATE(G)                                                                          \
  template class McmcChain<G>;                                                                            \
  template McmcTrace<G> run_mcmc<G>(const Network&, const McmcConfig&);                                  \
  template McmcTrace<G> run_mcmc<G>(const Network&, const LatentConfiguration<G>&, const AnchorSpec&,    \
                                    const McmcConfig&);

GEOLATNET_INSTANTIATE(Hyperbolic)
GEOLATNET_INSTANTIATE(Spherical)

#undef GEOLATNET_INSTANTIATE

}  // namespace geolatnet
