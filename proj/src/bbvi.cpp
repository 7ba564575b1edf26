#include "geolatnet/bbvi.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <type_traits>

#include "geolatnet/errors.hpp"
#include "geolatnet/parallel.hpp"
#include "geolatnet/point_cloud.hpp"

namespace geolatnet {

namespace {

constexpr std::size_t kAllParams[] = {0, 1, 2};
constexpr std::size_t kSecondAnchorParams[] = {0, 2};
constexpr std::size_t kFirstAnchorParams[] = {2};

double sigmoid(double x) noexcept { return x >= 0.0 ? 1.0 / (1.0 + std::exp(-x)) : std::exp(x) / (1.0 + std::exp(x)); }

// d/ds log erf(s / sqrt 2).
double dlog_erf(double s) { return 2.0 * std::exp(-s * s / 2.0) / (std::sqrt(2.0 * kPi) * std::erf(s / std::sqrt(2.0))); }

DiskPoint disk_location(double r, double phi) { return DiskPoint(r * std::cos(phi), r * std::sin(phi)); }

SpherePoint sphere_location(double omega, double phi) {
  return SpherePoint(std::cos(phi) * std::sin(omega), std::sin(phi) * std::sin(omega), std::cos(omega));
}

// Gradient of log q at a disk location given in polar form; r enters through
// r* = logit(r), s through log s.
std::array<double, 3> hyperbolic_grad_at(const DiskPoint& z, double r, double phi, double s) {
  const DiskPoint zt = disk_location(r, phi);
  const double d = hyperbolic_distance(zt, z);
  const Vec2 dd = hyperbolic_distance_gradient(zt, z);
  const double c = -d / (s * s);
  const double gx = c * dd[0], gy = c * dd[1];
  const double cp = std::cos(phi), sp = std::sin(phi);
  const double d_r = gx * cp + gy * sp;
  const double d_phi = r * (-gx * sp + gy * cp);
  const double d_s = -1.0 / s - s - dlog_erf(s) + d * d / (s * s * s);
  return {d_r * r * (1.0 - r), d_phi, d_s * s};
}

std::array<double, 3> spherical_grad_at(const SpherePoint& z, double omega, double phi, double kappa) {
  const double co = std::cos(omega), so = std::sin(omega);
  const double cp = std::cos(phi), sp = std::sin(phi);
  const Vec3 zt{cp * so, sp * so, co};
  const Vec3& x = z.coords();
  const double dot = zt[0] * x[0] + zt[1] * x[1] + zt[2] * x[2];
  const double d_omega = kappa * (cp * co * x[0] + sp * co * x[1] - so * x[2]);
  const double d_phi = kappa * (-sp * so * x[0] + cp * so * x[1]);
  // 2 e^{-2k} / (1 - e^{-2k}) = 2 / (e^{2k} - 1)
  const double d_kappa = 1.0 / kappa + (dot - 1.0) - 2.0 / std::expm1(2.0 * kappa);
  return {d_omega, d_phi, d_kappa * kappa};
}

LatentParams<Hyperbolic> node_distribution(const VariationalState<Hyperbolic>& s, std::size_t i) {
  return {s.location(i), s.node_dispersion(i)};
}
LatentParams<Spherical> node_distribution(const VariationalState<Spherical>& s, std::size_t i) {
  return {s.location(i), s.node_dispersion(i)};
}

std::array<double, 3> node_gradient(const VariationalState<Hyperbolic>& s, std::size_t i, const DiskPoint& z) {
  const auto& p = s.nodes[i];
  const bool first = i == s.anchors.i1;
  const double r = first ? 0.0 : sigmoid(p[0]);
  const double phi = first || i == s.anchors.i2 ? 0.0 : p[1];
  return hyperbolic_grad_at(z, r, phi, std::exp(p[2]));
}

std::array<double, 3> node_gradient(const VariationalState<Spherical>& s, std::size_t i, const SpherePoint& z) {
  const auto& p = s.nodes[i];
  const bool first = i == s.anchors.i1;
  const double omega = first ? 0.0 : p[0];
  const double phi = first || i == s.anchors.i2 ? 0.0 : p[1];
  return spherical_grad_at(z, omega, phi, std::exp(p[2]));
}

bool location_admissible(const VariationalState<Hyperbolic>& s, std::size_t i) {
  if (i == s.anchors.i1) return true;
  const auto& p = s.nodes[i];
  const double r = sigmoid(p[0]);
  const double phi = i == s.anchors.i2 ? 0.0 : p[1];
  if (!(r > 0.0) || !DiskPoint::is_valid(r * std::cos(phi), r * std::sin(phi))) return false;
  if (i == s.anchors.i3) return r * std::sin(phi) > 0.0;
  return true;
}

bool location_admissible(const VariationalState<Spherical>& s, std::size_t i) {
  if (i == s.anchors.i1) return true;
  const auto& p = s.nodes[i];
  if (i == s.anchors.i2) return p[0] > 0.0 && p[0] < kPi;
  if (i == s.anchors.i3) return std::sin(p[1]) * std::sin(p[0]) > 0.0;
  return true;
}

template <class G>
struct SampleEval {
  JointSample<G> sample;
  double loglik = 0.0;
  double log_alpha_prior = 0.0;
  double log_q_alpha = 0.0;
  std::vector<double> row_loglik;
  std::vector<double> log_latent_prior;
  std::vector<double> log_q_node;

  double elbo_term() const {
    double v = loglik + log_alpha_prior - log_q_alpha;
    for (std::size_t i = 0; i < row_loglik.size(); ++i) v += log_latent_prior[i] - log_q_node[i];
    return v;
  }
};

template <class G>
void evaluate_sample(const Network& y, const VariationalState<G>& state, const PriorSpec& priors, SampleEval<G>& e) {
  const std::size_t n = y.size();
  const auto d = distance_matrix(PointCloud<G>(e.sample.z));
  e.row_loglik.assign(n, 0.0);
  e.log_latent_prior.resize(n);
  e.log_q_node.resize(n);
  CompensatedSum total;
  for (std::size_t i = 0; i < n; ++i) {
    e.row_loglik[i] = row_log_likelihood(y.row(i), std::span<const double>(d.data() + i * n, n), e.sample.alpha, i);
    e.log_latent_prior[i] = latent_log_density(e.sample.z[i], state.theta);
    e.log_q_node[i] = latent_log_density(e.sample.z[i], node_distribution(state, i));
  }
  for (std::size_t i = 0; i + 1 < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) total.add(dyad_log_likelihood(y.edge(i, j), e.sample.alpha - d[i * n + j]));
  e.loglik = total.value();
  e.log_alpha_prior = gaussian_log_density(e.sample.alpha, priors.alpha_prior);
  e.log_q_alpha = log_q_alpha(e.sample.alpha, state.m_tilde, state.log_sigma_tilde);
}

template <class G>
std::vector<SampleEval<G>> draw_and_evaluate(const Network& y, const VariationalState<G>& state, std::size_t S,
                                             Rng& rng, const PriorSpec& priors) {
  std::vector<SampleEval<G>> evals(S);
  // Draw sequentially so results do not depend on the thread count.
  for (auto& e : evals) e.sample = sample_q(state, rng);
  parallel_for(S, [&](std::size_t s) { evaluate_sample(y, state, priors, evals[s]); });
  return evals;
}

}  // namespace

void BbviConfig::validate() const {
  if (iterations < 1) throw ConfigError("iterations must be >= 1");
  if (samples < 2) throw ConfigError("samples (S) must be >= 2 for the control variate");
  if (!(learning_rate > 0.0)) throw ConfigError("learning_rate must be positive");
  if (!(rmsprop_decay > 0.0 && rmsprop_decay < 1.0)) throw ConfigError("rmsprop_decay must lie in (0, 1)");
  if (!(rmsprop_epsilon > 0.0)) throw ConfigError("rmsprop_epsilon must be positive");
  if (!(init_node_scale > 0.0) || !(init_node_kappa > 0.0) || !(init_alpha_sd > 0.0))
    throw ConfigError("initial variational dispersions must be positive");
  if (!(latent_sigma > 0.0) || !(latent_kappa >= 0.0)) throw ConfigError("latent_sigma/latent_kappa out of range");
  if (!(priors.alpha_prior.s > 0.0)) throw ConfigError("alpha_prior_sd must be positive");
  if (early_stop < 0.0) throw ConfigError("early_stop must be >= 0");
}

template <class G>
double VariationalState<G>::sigma_tilde() const noexcept {
  return std::exp(log_sigma_tilde);
}

template <class G>
typename G::Point VariationalState<G>::location(std::size_t i) const {
  if (i == anchors.i1) return canonical_first(G{});
  const auto& p = nodes[i];
  const double phi = i == anchors.i2 ? 0.0 : p[1];
  if constexpr (std::is_same_v<G, Hyperbolic>)
    return disk_location(sigmoid(p[0]), phi);
  else
    return sphere_location(p[0], phi);
}

template <class G>
double VariationalState<G>::node_dispersion(std::size_t i) const noexcept {
  return std::exp(nodes[i][2]);
}

template <class G>
std::span<const std::size_t> VariationalState<G>::free_parameters(std::size_t i) const noexcept {
  if (i == anchors.i1) return kFirstAnchorParams;
  if (i == anchors.i2) return kSecondAnchorParams;
  return kAllParams;
}

template <class G>
LatentConfiguration<G> VariationalState<G>::mean_configuration() const {
  LatentConfiguration<G> c;
  c.alpha = m_tilde;
  c.theta = theta;
  c.z.reserve(nodes.size());
  for (std::size_t i = 0; i < nodes.size(); ++i) c.z.push_back(location(i));
  return c;
}

template <class G>
VariationalState<G> initial_variational_state(const LatentConfiguration<G>& start, const AnchorSpec& anchors,
                                              const BbviConfig& cfg) {
  VariationalState<G> s;
  s.m_tilde = start.alpha;
  s.log_sigma_tilde = std::log(cfg.init_alpha_sd);
  s.anchors = anchors;
  s.theta = start.theta;
  s.nodes.resize(start.z.size());
  for (std::size_t i = 0; i < start.z.size(); ++i) {
    const auto& z = start.z[i];
    auto& p = s.nodes[i];
    if constexpr (std::is_same_v<G, Hyperbolic>) {
      const double r = std::clamp(std::sqrt(z.norm2()), 1e-6, 1.0 - 1e-6);
      p = {std::log(r / (1.0 - r)), std::atan2(z.y(), z.x()), std::log(cfg.init_node_scale)};
    } else {
      p = {std::acos(std::clamp(z.z(), -1.0, 1.0)), std::atan2(z.y(), z.x()), std::log(cfg.init_node_kappa)};
    }
    if (i == anchors.i1) p[0] = p[1] = 0.0;
    if (i == anchors.i2) p[1] = 0.0;
  }
  return s;
}

double log_q_alpha(double alpha, double m_tilde, double log_sigma_tilde) {
  return gaussian_log_density(alpha, {m_tilde, std::exp(log_sigma_tilde)});
}

std::array<double, 2> grad_log_q_alpha(double alpha, double m_tilde, double sigma_tilde) {
  const double r = alpha - m_tilde;
  const double s2 = sigma_tilde * sigma_tilde;
  return {r / s2, (-1.0 / sigma_tilde + r * r / (s2 * sigma_tilde)) * sigma_tilde};
}

double log_q_hyperbolic(const DiskPoint& z, double r_star, double phi, double log_s) {
  return hyp_normal_log_density(z, {disk_location(sigmoid(r_star), phi), std::exp(log_s)});
}

std::array<double, 3> grad_log_q_hyperbolic(const DiskPoint& z, double r_star, double phi, double log_s) {
  return hyperbolic_grad_at(z, sigmoid(r_star), phi, std::exp(log_s));
}

double log_q_spherical(const SpherePoint& z, double omega, double phi, double log_kappa) {
  return vmf_log_density(z, {sphere_location(omega, phi), std::exp(log_kappa)});
}

std::array<double, 3> grad_log_q_spherical(const SpherePoint& z, double omega, double phi, double log_kappa) {
  return spherical_grad_at(z, omega, phi, std::exp(log_kappa));
}

double control_variate_coeff(std::span<const double> f, std::span<const double> h, std::size_t S, std::size_t D) {
  if (S < 2 || f.size() != S * D || h.size() != S * D) throw DomainError("control variate needs S >= 2 samples of size S x D");
  double cov = 0.0, var = 0.0;
  for (std::size_t d = 0; d < D; ++d) {
    double mf = 0.0, mh = 0.0;
    for (std::size_t s = 0; s < S; ++s) {
      mf += f[s * D + d];
      mh += h[s * D + d];
    }
    mf /= static_cast<double>(S);
    mh /= static_cast<double>(S);
    for (std::size_t s = 0; s < S; ++s) {
      const double dh = h[s * D + d] - mh;
      cov += (f[s * D + d] - mf) * dh;
      var += dh * dh;
    }
  }
  if (var < 1e-300) return 0.0;
  return cov / var;
}

RmspropUpdate rmsprop_step(double grad, double accumulator, const BbviConfig& cfg) {
  const double acc = cfg.rmsprop_decay * accumulator + (1.0 - cfg.rmsprop_decay) * grad * grad;
  return {cfg.learning_rate * grad / std::sqrt(acc + cfg.rmsprop_epsilon), acc};
}

template <class G>
JointSample<G> sample_q(const VariationalState<G>& state, Rng& rng) {
  JointSample<G> s;
  s.alpha = state.m_tilde + state.sigma_tilde() * standard_normal(rng);
  s.z.reserve(state.size());
  for (std::size_t i = 0; i < state.size(); ++i) s.z.push_back(sample_latent(node_distribution(state, i), rng));
  return s;
}

template <class G>
double log_q(const VariationalState<G>& state, const JointSample<G>& s) {
  CompensatedSum sum;
  sum.add(log_q_alpha(s.alpha, state.m_tilde, state.log_sigma_tilde));
  for (std::size_t i = 0; i < state.size(); ++i) sum.add(latent_log_density(s.z[i], node_distribution(state, i)));
  return sum.value();
}

template <class G>
double elbo_estimate(const Network& y, const VariationalState<G>& state, std::size_t S, Rng& rng,
                     const PriorSpec& priors) {
  if (S < 1) throw DomainError("elbo_estimate needs S >= 1");
  const auto evals = draw_and_evaluate(y, state, S, rng, priors);
  CompensatedSum sum;
  for (const auto& e : evals) sum.add(e.elbo_term());
  return sum.value() / static_cast<double>(S);
}

template <class G>
BbviResult<G> run_bbvi(const Network& y, VariationalState<G> state, const BbviConfig& cfg) {
  cfg.validate();
  const std::size_t n = y.size();
  if (state.size() != n) throw DomainError("variational state size does not match the network");
  Rng rng = derive_rng(cfg.seed, 1);
  const std::size_t S = cfg.samples;

  BbviResult<G> out;
  std::array<double, 2> acc_alpha{};
  std::vector<NodeParams> acc_nodes(n, NodeParams{});
  std::vector<double> f, h;
  double elbo0 = 0.0;

  for (std::size_t it = 0; it < cfg.iterations; ++it) {
    const auto evals = draw_and_evaluate(y, state, S, rng, cfg.priors);
    CompensatedSum elbo;
    for (const auto& e : evals) elbo.add(e.elbo_term());
    const double elbo_value = elbo.value() / static_cast<double>(S);
    if (!std::isfinite(elbo_value))
      throw DivergedOptimization("ELBO estimate became non-finite at iteration " + std::to_string(it + 1));
    if (it == 0) elbo0 = elbo_value;
    if (elbo_value < elbo0 - 1e6)
      throw DivergedOptimization("ELBO fell more than 1e6 below its initial value at iteration " +
                                 std::to_string(it + 1));
    out.elbo_trace.push_back(elbo_value);

    double max_move = 0.0;
    // alpha block: its Markov blanket is the whole likelihood.
    {
      f.assign(S * 2, 0.0);
      h.assign(S * 2, 0.0);
      const double sig = state.sigma_tilde();
      for (std::size_t s = 0; s < S; ++s) {
        const auto& e = evals[s];
        const auto g = grad_log_q_alpha(e.sample.alpha, state.m_tilde, sig);
        const double w = e.loglik + e.log_alpha_prior - e.log_q_alpha;
        for (std::size_t d = 0; d < 2; ++d) {
          h[s * 2 + d] = g[d];
          f[s * 2 + d] = g[d] * w;
        }
      }
      const double a = control_variate_coeff(f, h, S, 2);
      double* params[2] = {&state.m_tilde, &state.log_sigma_tilde};
      for (std::size_t d = 0; d < 2; ++d) {
        double g = 0.0;
        for (std::size_t s = 0; s < S; ++s) g += f[s * 2 + d] - a * h[s * 2 + d];
        g /= static_cast<double>(S);
        const auto up = rmsprop_step(g, acc_alpha[d], cfg);
        acc_alpha[d] = up.accumulator;
        *params[d] += up.step;
        max_move = std::max(max_move, std::abs(up.step));
      }
    }
    // Node blocks.
    std::vector<NodeParams> steps(n, NodeParams{});
    for (std::size_t i = 0; i < n; ++i) {
      const auto idx = state.free_parameters(i);
      const std::size_t D = idx.size();
      f.assign(S * D, 0.0);
      h.assign(S * D, 0.0);
      for (std::size_t s = 0; s < S; ++s) {
        const auto& e = evals[s];
        const auto g = node_gradient(state, i, e.sample.z[i]);
        const double w = e.row_loglik[i] + e.log_latent_prior[i] - e.log_q_node[i];
        for (std::size_t d = 0; d < D; ++d) {
          h[s * D + d] = g[idx[d]];
          f[s * D + d] = g[idx[d]] * w;
        }
      }
      const double a = control_variate_coeff(f, h, S, D);
      for (std::size_t d = 0; d < D; ++d) {
        double g = 0.0;
        for (std::size_t s = 0; s < S; ++s) g += f[s * D + d] - a * h[s * D + d];
        g /= static_cast<double>(S);
        const auto up = rmsprop_step(g, acc_nodes[i][idx[d]], cfg);
        acc_nodes[i][idx[d]] = up.accumulator;
        steps[i][idx[d]] = up.step;
      }
    }
    // Gradients above all use the pre-update state; apply afterwards.
    for (std::size_t i = 0; i < n; ++i) {
      const NodeParams old = state.nodes[i];
      for (std::size_t k = 0; k < 3; ++k) state.nodes[i][k] += steps[i][k];
      if (!location_admissible(state, i)) {
        // Hold the location, keep the dispersion step.
        state.nodes[i][0] = old[0];
        state.nodes[i][1] = old[1];
        steps[i][0] = steps[i][1] = 0.0;
      }
      for (double st : steps[i]) max_move = std::max(max_move, std::abs(st));
    }

    out.loglik_trace.push_back(log_likelihood(y, state.mean_configuration()));
    out.m_trace.push_back(state.m_tilde);
    out.sigma_trace.push_back(state.sigma_tilde());
    out.iterations_run = it + 1;
    if (cfg.early_stop > 0.0 && max_move < cfg.early_stop) break;
  }
  out.state = std::move(state);
  return out;
}

template <class G>
BbviResult<G> run_bbvi(const Network& y, const BbviConfig& cfg) {
  cfg.validate();
  LatentParams<G> theta;
  if constexpr (std::is_same_v<G, Hyperbolic>)
    theta.sigma = cfg.latent_sigma;
  else
    theta.kappa = cfg.latent_kappa;
  Rng init_rng = derive_rng(cfg.seed, 0);
  const auto start = starting_state<G>(y, theta, cfg.anchors, init_rng, cfg.mds);
  auto result = run_bbvi<G>(y, initial_variational_state<G>(start.cfg, start.anchors, cfg), cfg);
  result.init_stress = start.stress;
  return result;
}

#define GEOLATNET_INSTANTIATE(G)                                                                             \
  template struct VariationalState<G>;                                                                       \
  template VariationalState<G> initial_variational_state<G>(const LatentConfiguration<G>&, const AnchorSpec&, \
                                                            const BbviConfig&);                               \
  template JointSample<G> sample_q<G>(const VariationalState<G>&, Rng&);                                     \
  template double log_q<G>(const VariationalState<G>&, const JointSample<G>&);                               \
  template double elbo_estimate<G>(const Network&, const VariationalState<G>&, std::size_t, Rng&,            \
                                   const PriorSpec&);                                                        \
  template BbviResult<G> run_bbvi<G>(const Network&, const BbviConfig&);                                     \
  template BbviResult<G> run_bbvi<G>(const Network&, VariationalState<G>, const BbviConfig&);

GEOLATNET_INSTANTIATE(Hyperbolic)
GEOLATNET_INSTANTIATE(Spherical)

#undef GEOLATNET_INSTANTIATE

}  // namespace geolatnet
