#pragma once

// Black-box variational inference with score-function gradients, per-block
// control variates and rmsprop step sizes. The mean-field family is
// N(m, sigma) for alpha times one geometry-specific factor per node.

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "geolatnet/identifiability.hpp"
#include "geolatnet/init.hpp"
#include "geolatnet/model.hpp"
#include "geolatnet/network.hpp"
#include "geolatnet/random.hpp"

namespace geolatnet {

struct BbviConfig {
  std::size_t iterations = 1000;
  std::size_t samples = 20;  // S
  std::uint64_t seed = 1;
  double learning_rate = 0.05;
  double rmsprop_decay = 0.9;
  double rmsprop_epsilon = 1e-8;
  // Starting dispersions: node scale (disk), node concentration (sphere), alpha sd.
  double init_node_scale = 0.5;
  double init_node_kappa = 10.0;
  double init_alpha_sd = 0.5;
  // Stop once every parameter moves less than this in one iteration; 0 disables.
  double early_stop = 0.0;
  PriorSpec priors{};
  // Fixed theta_z scale used by the model term.
  double latent_sigma = 1.3;
  double latent_kappa = 2.5;
  std::optional<AnchorSpec> anchors;
  MdsOptions mds{};

  void validate() const;
};

// Per-node unconstrained parameters.
//   disk:   {r*, phi, log s}   location (sigmoid(r*) cos phi, sigmoid(r*) sin phi)
//   sphere: {omega, phi, log kappa}   location (cos phi sin omega, sin phi sin omega, cos omega)
// The first anchor's location is fixed at the canonical point; the second
// anchor keeps phi = 0.
using NodeParams = std::array<double, 3>;

template <class G>
struct VariationalState {
  using Point = typename G::Point;
  double m_tilde = 0.0;
  double log_sigma_tilde = 0.0;
  std::vector<NodeParams> nodes;
  AnchorSpec anchors{};
  LatentParams<G> theta{};  // held fixed

  std::size_t size() const noexcept { return nodes.size(); }
  double sigma_tilde() const noexcept;
  Point location(std::size_t i) const;
  double node_dispersion(std::size_t i) const noexcept;  // s on the disk, kappa on the sphere
  // Indices into NodeParams that are free for node i.
  std::span<const std::size_t> free_parameters(std::size_t i) const noexcept;
  // Variational means as a configuration (alpha = m_tilde).
  LatentConfiguration<G> mean_configuration() const;
};

// Builds the starting state from a canonical configuration.
template <class G>
VariationalState<G> initial_variational_state(const LatentConfiguration<G>& start, const AnchorSpec& anchors,
                                              const BbviConfig& cfg);

// --- log q and its gradients -----------------------------------------------

double log_q_alpha(double alpha, double m_tilde, double log_sigma_tilde);
// (d/dm, d/d log sigma).
std::array<double, 2> grad_log_q_alpha(double alpha, double m_tilde, double sigma_tilde);

double log_q_hyperbolic(const DiskPoint& z, double r_star, double phi, double log_s);
// (d/dr*, d/dphi, d/d log s).
std::array<double, 3> grad_log_q_hyperbolic(const DiskPoint& z, double r_star, double phi, double log_s);

double log_q_spherical(const SpherePoint& z, double omega, double phi, double log_kappa);
// (d/domega, d/dphi, d/d log kappa).
std::array<double, 3> grad_log_q_spherical(const SpherePoint& z, double omega, double phi, double log_kappa);

inline double log_q_node(const DiskPoint& z, const NodeParams& p) { return log_q_hyperbolic(z, p[0], p[1], p[2]); }
inline double log_q_node(const SpherePoint& z, const NodeParams& p) { return log_q_spherical(z, p[0], p[1], p[2]); }
inline std::array<double, 3> grad_log_q_node(const DiskPoint& z, const NodeParams& p) {
  return grad_log_q_hyperbolic(z, p[0], p[1], p[2]);
}
inline std::array<double, 3> grad_log_q_node(const SpherePoint& z, const NodeParams& p) {
  return grad_log_q_spherical(z, p[0], p[1], p[2]);
}

// --- estimator pieces ------------------------------------------------------

// f and h are S x D, row-major. Returns sum_d Cov(f_d, h_d) / sum_d Var(h_d),
// or 0 when the summed variance is below 1e-300.
double control_variate_coeff(std::span<const double> f, std::span<const double> h, std::size_t S, std::size_t D);

struct RmspropUpdate {
  double step = 0.0;
  double accumulator = 0.0;
};
RmspropUpdate rmsprop_step(double grad, double accumulator, const BbviConfig& cfg);

template <class G>
struct JointSample {
  double alpha = 0.0;
  std::vector<typename G::Point> z;
};

template <class G>
JointSample<G> sample_q(const VariationalState<G>& state, Rng& rng);

template <class G>
double log_q(const VariationalState<G>& state, const JointSample<G>& s);

// (1/S) sum_s [log p(Y, Z_s, alpha_s) - log q(Z_s, alpha_s)].
template <class G>
double elbo_estimate(const Network& y, const VariationalState<G>& state, std::size_t S, Rng& rng,
                     const PriorSpec& priors);

template <class G>
struct BbviResult {
  VariationalState<G> state;
  std::vector<double> elbo_trace;
  std::vector<double> loglik_trace;  // log-likelihood at the variational means
  std::vector<double> m_trace;
  std::vector<double> sigma_trace;
  std::size_t iterations_run = 0;
  double init_stress = 0.0;
};

template <class G>
BbviResult<G> run_bbvi(const Network& y, const BbviConfig& cfg);

template <class G>
BbviResult<G> run_bbvi(const Network& y, VariationalState<G> start, const BbviConfig& cfg);

}  // namespace geolatnet
