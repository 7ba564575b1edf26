#include <doctest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "geolatnet/bbvi.hpp"
#include "geolatnet/errors.hpp"
#include "geolatnet/io.hpp"
#include "support.hpp"

using namespace geolatnet;

namespace {

constexpr double kPiD = std::numbers::pi;

template <class F>
double central_difference(F f, double x, double h = 1e-6) {
  return (f(x + h) - f(x - h)) / (2 * h);
}

bool close(double a, double b, double rel) { return std::abs(a - b) <= rel * std::max(1.0, std::abs(b)); }

double mean(const std::vector<double>& x) {
  double s = 0.0;
  for (double v : x) s += v;
  return s / static_cast<double>(x.size());
}

double sd(const std::vector<double>& x) {
  const double m = mean(x);
  double s = 0.0;
  for (double v : x) s += (v - m) * (v - m);
  return std::sqrt(s / static_cast<double>(x.size() - 1));
}

}  // namespace

TEST_CASE("alpha factor gradients") {
  Rng rng(1);
  for (int k = 0; k < 100; ++k) {
    const double a = 3 * standard_normal(rng), m = 3 * standard_normal(rng), ls = standard_normal(rng);
    const auto g = grad_log_q_alpha(a, m, std::exp(ls));
    CHECK(close(g[0], central_difference([&](double x) { return log_q_alpha(a, x, ls); }, m), 1e-4));
    CHECK(close(g[1], central_difference([&](double x) { return log_q_alpha(a, m, x); }, ls), 1e-4));
  }
  // At the mean: no pull on m, and the log-sigma derivative is -1.
  const auto g0 = grad_log_q_alpha(0.7, 0.7, 2.0);
  CHECK(g0[0] == 0.0);
  CHECK(g0[1] == doctest::Approx(-1.0));
  // One sd away the log-sigma derivative vanishes.
  CHECK(std::abs(grad_log_q_alpha(1.5, 0.5, 1.0)[1]) < 1e-15);
}

TEST_CASE("disk factor gradients match finite differences") {
  Rng rng(2);
  for (int k = 0; k < 100; ++k) {
    const DiskPoint z = testsupport::random_disk(rng, 0.9);
    const double rs = -3.0 + 5.0 * uniform01(rng);
    const double phi = 2 * kPiD * uniform01(rng);
    const double ls = std::log(0.2) + (std::log(2.0) - std::log(0.2)) * uniform01(rng);
    const auto g = grad_log_q_hyperbolic(z, rs, phi, ls);
    CHECK(close(g[0], central_difference([&](double x) { return log_q_hyperbolic(z, x, phi, ls); }, rs), 1e-4));
    CHECK(close(g[1], central_difference([&](double x) { return log_q_hyperbolic(z, rs, x, ls); }, phi), 1e-4));
    CHECK(close(g[2], central_difference([&](double x) { return log_q_hyperbolic(z, rs, phi, x); }, ls), 1e-4));
  }
}

TEST_CASE("sphere factor gradients match finite differences") {
  Rng rng(3);
  for (int k = 0; k < 100; ++k) {
    const SpherePoint z = testsupport::random_sphere(rng);
    const double om = 0.1 + (kPiD - 0.2) * uniform01(rng);
    const double phi = 2 * kPiD * uniform01(rng);
    const double lk = -1.0 + 4.0 * uniform01(rng);
    const auto g = grad_log_q_spherical(z, om, phi, lk);
    CHECK(close(g[0], central_difference([&](double x) { return log_q_spherical(z, x, phi, lk); }, om), 1e-4));
    CHECK(close(g[1], central_difference([&](double x) { return log_q_spherical(z, om, x, lk); }, phi), 1e-4));
    CHECK(close(g[2], central_difference([&](double x) { return log_q_spherical(z, om, phi, x); }, lk), 1e-4));
  }
}

TEST_CASE("gradients at the variational location") {
  const double rs = 0.4, phi = 1.1;
  const double r = 1.0 / (1.0 + std::exp(-rs));
  const DiskPoint at(r * std::cos(phi), r * std::sin(phi));
  const auto g = grad_log_q_hyperbolic(at, rs, phi, 0.0);
  CHECK(std::abs(g[0]) < 1e-12);
  CHECK(std::abs(g[1]) < 1e-12);
  // d/ds of -log Z(s) at s = 1: -(1/s + s + sqrt(2/pi) e^{-s^2/2} / erf(s/sqrt 2)).
  const double oracle = -(2.0 + std::sqrt(2.0 / kPiD) * std::exp(-0.5) / std::erf(1.0 / std::sqrt(2.0)));
  CHECK(g[2] == doctest::Approx(oracle).epsilon(1e-12));
  CHECK(oracle == doctest::Approx(-2.70888).epsilon(1e-5));

  const double om = 0.8, sp = -0.3;
  const SpherePoint sat(std::cos(sp) * std::sin(om), std::sin(sp) * std::sin(om), std::cos(om));
  for (double kappa : {0.3, 2.5, 40.0}) {
    const auto gs = grad_log_q_spherical(sat, om, sp, std::log(kappa));
    CHECK(std::abs(gs[0]) < 1e-12);
    CHECK(std::abs(gs[1]) < 1e-12);
    // kappa d/dkappa log(kappa / (2 pi (1 - e^{-2 kappa}))).
    CHECK(gs[2] == doctest::Approx(1.0 - 2.0 * kappa / (std::exp(2.0 * kappa) - 1.0)).epsilon(1e-10));
  }
}

TEST_CASE_TEMPLATE("score functions have zero mean under q", G, Hyperbolic, Spherical) {
  Rng rng(4);
  const NodeParams p = std::is_same_v<G, Hyperbolic> ? NodeParams{0.3, 0.7, std::log(0.6)}
                                                     : NodeParams{1.0, -0.4, std::log(3.0)};
  typename G::Point loc;
  double disp;
  if constexpr (std::is_same_v<G, Hyperbolic>) {
    const double r = 1.0 / (1.0 + std::exp(-p[0]));
    loc = DiskPoint(r * std::cos(p[1]), r * std::sin(p[1]));
    disp = std::exp(p[2]);
  } else {
    loc = SpherePoint(std::cos(p[1]) * std::sin(p[0]), std::sin(p[1]) * std::sin(p[0]), std::cos(p[0]));
    disp = std::exp(p[2]);
  }
  const LatentParams<G> dist{loc, disp};
  std::vector<std::vector<double>> g(3);
  for (int s = 0; s < 10000; ++s) {
    const auto gr = grad_log_q_node(sample_latent(dist, rng), p);
    for (int d = 0; d < 3; ++d) g[d].push_back(gr[d]);
  }
  for (int d = 0; d < 3; ++d) CHECK(std::abs(mean(g[d])) < 3 * sd(g[d]) / 100.0);
}

TEST_CASE("control variate coefficient") {
  const std::vector<double> h{1, 2, 3, 4, -1, 0.5};  // S = 3, D = 2
  CHECK(control_variate_coeff(h, h, 3, 2) == doctest::Approx(1.0));
  std::vector<double> f2(h.size());
  for (std::size_t k = 0; k < h.size(); ++k) f2[k] = -2.5 * h[k] + 7.0;
  CHECK(control_variate_coeff(f2, h, 3, 2) == doctest::Approx(-2.5));
  const std::vector<double> flat{3, 3, 3, 3, 3, 3};
  CHECK(control_variate_coeff(h, flat, 3, 2) == 0.0);
  CHECK_THROWS_AS(control_variate_coeff(h, h, 1, 6), DomainError);

  // With a large constant weight, subtracting a * h removes most of the variance.
  Rng rng(5);
  const std::size_t S = 200;
  std::vector<double> f(S), hh(S), resid(S);
  for (std::size_t s = 0; s < S; ++s) {
    hh[s] = standard_normal(rng);
    f[s] = hh[s] * (10.0 + 0.1 * standard_normal(rng));
  }
  const double a = control_variate_coeff(f, hh, S, 1);
  for (std::size_t s = 0; s < S; ++s) resid[s] = f[s] - a * hh[s];
  CHECK(sd(resid) < 0.05 * sd(f));
}

TEST_CASE("rmsprop steps") {
  BbviConfig cfg;
  const auto first = rmsprop_step(3.0, 0.0, cfg);
  CHECK(first.accumulator == doctest::Approx(0.1 * 9.0));
  CHECK(first.step == doctest::Approx(cfg.learning_rate / std::sqrt(0.1)).epsilon(1e-6));
  CHECK(rmsprop_step(-3.0, 0.0, cfg).step == doctest::Approx(-first.step));
  CHECK(rmsprop_step(0.0, 0.0, cfg).step == 0.0);
  double acc = 0.0, step = 0.0;
  for (int k = 0; k < 500; ++k) {
    const auto u = rmsprop_step(2.0, acc, cfg);
    acc = u.accumulator;
    step = u.step;
  }
  CHECK(step == doctest::Approx(cfg.learning_rate).epsilon(1e-6));
}

TEST_CASE("BBVI configuration validation") {
  BbviConfig c;
  CHECK_NOTHROW(c.validate());
  c.samples = 1;
  CHECK_THROWS_AS(c.validate(), ConfigError);
  c = BbviConfig{};
  c.rmsprop_decay = 1.0;
  CHECK_THROWS_AS(c.validate(), ConfigError);
  c = BbviConfig{};
  c.learning_rate = 0.0;
  CHECK_THROWS_AS(c.validate(), ConfigError);
  c = BbviConfig{};
  c.iterations = 0;
  CHECK_THROWS_AS(c.validate(), ConfigError);
}

TEST_CASE_TEMPLATE("ELBO estimate is the mean of log p minus log q", G, Hyperbolic, Spherical) {
  const auto flo = read_edge_list_file(testsupport::data_path("florentine.txt"));
  BbviConfig cfg;
  LatentParams<G> theta;
  Rng init(1);
  const auto start = starting_state<G>(flo, theta, std::nullopt, init);
  const auto q = initial_variational_state<G>(start.cfg, start.anchors, cfg);
  const PriorSpec priors{};

  Rng a(8), b(8), c(8);
  const double est = elbo_estimate(flo, q, 50, a, priors);
  CHECK(est == elbo_estimate(flo, q, 50, c, priors));
  double oracle = 0.0;
  for (int s = 0; s < 50; ++s) {
    const auto js = sample_q(q, b);
    const LatentConfiguration<G> cf{js.z, js.alpha, theta};
    oracle += log_likelihood(flo, cf) + log_latent_prior<G>(js.z, theta) +
              gaussian_log_density(js.alpha, priors.alpha_prior) - log_q(q, js);
  }
  CHECK(est == doctest::Approx(oracle / 50).epsilon(1e-10));
}

TEST_CASE_TEMPLATE("optimization is seeded and keeps the anchors", G, Hyperbolic, Spherical) {
  const auto kar = read_edge_list_file(testsupport::data_path("karate.txt"));
  BbviConfig cfg;
  cfg.iterations = 150;
  cfg.seed = 4;
  const auto r1 = run_bbvi<G>(kar, cfg);
  const auto r2 = run_bbvi<G>(kar, cfg);
  CHECK(r1.elbo_trace == r2.elbo_trace);
  CHECK(r1.state.m_tilde == r2.state.m_tilde);
  CHECK(r1.iterations_run == 150);
  CHECK(r1.elbo_trace.size() == 150);
  CHECK(r1.m_trace.size() == 150);
  const auto mc = r1.state.mean_configuration();
  CHECK(satisfies_anchor_constraints<G>(mc.z, r1.state.anchors));
  CHECK(r1.state.nodes[r1.state.anchors.i1][0] == 0.0);
  CHECK(r1.state.nodes[r1.state.anchors.i2][1] == 0.0);

  // The ELBO climbs from the stress start.
  const std::vector<double> head(r1.elbo_trace.begin(), r1.elbo_trace.begin() + 20);
  const std::vector<double> tail(r1.elbo_trace.end() - 20, r1.elbo_trace.end());
  CHECK(mean(tail) > mean(head));

  cfg.early_stop = 10.0;
  CHECK(run_bbvi<G>(kar, cfg).iterations_run == 1);

  CHECK_THROWS_AS(run_bbvi<G>(Network(5), r1.state, cfg), DomainError);
}

TEST_CASE_TEMPLATE("an empty graph drives alpha down", G, Hyperbolic, Spherical) {
  BbviConfig cfg;
  cfg.iterations = 300;
  Rng init(1);
  auto start = starting_state<G>(Network(3), LatentParams<G>{}, std::nullopt, init);
  start.cfg.alpha = 2.0;
  const auto r = run_bbvi<G>(Network(3), initial_variational_state<G>(start.cfg, start.anchors, cfg), cfg);
  CHECK(r.m_trace.back() < 2.0 - 1.0);
  CHECK(r.state.m_tilde < 0.0);
}

TEST_CASE("free parameter sets") {
  VariationalState<Hyperbolic> s;
  s.nodes.assign(5, NodeParams{0.1, 0.2, 0.3});
  s.anchors = AnchorSpec{3, 1, 4};
  CHECK(s.free_parameters(3).size() == 1);
  CHECK(s.free_parameters(3)[0] == 2);
  CHECK(s.free_parameters(1).size() == 2);
  CHECK(s.free_parameters(0).size() == 3);
  CHECK(s.location(3) == DiskPoint());
  CHECK(s.location(1).y() == 0.0);
  CHECK(s.location(1).x() > 0.0);
  CHECK(s.node_dispersion(2) == doctest::Approx(std::exp(0.3)));
}

TEST_CASE("sphere omega gradient vanishes for a point orthogonal to its tangent") {
  const double om = 1.1, phi = 0.4;
  // (-sin phi, cos phi, 0) is orthogonal to d(location)/d omega.
  const SpherePoint z(-std::sin(phi), std::cos(phi), 0.0);
  CHECK(std::abs(grad_log_q_spherical(z, om, phi, std::log(3.0))[0]) < 1e-14);
}

TEST_CASE("rmsprop first step at a small learning rate") {
  BbviConfig cfg;
  cfg.learning_rate = 0.01;
  for (double g : {5.0, -0.3, 120.0}) {
    const double step = rmsprop_step(g, 0.0, cfg).step;
    CHECK(step == doctest::Approx(0.01 * g / std::sqrt(0.1 * g * g + 1e-8)).epsilon(1e-12));
    CHECK(std::abs(step) == doctest::Approx(0.0316).epsilon(1e-3));
  }
}

TEST_CASE_TEMPLATE("the ELBO stays below the log evidence", G, Hyperbolic, Spherical) {
  Network y(3);
  y.set_edge(0, 1, true);
  y.set_edge(1, 2, true);
  BbviConfig cfg;
  cfg.iterations = 300;
  const auto r = run_bbvi<G>(y, cfg);

  Rng rng(31);
  std::vector<double> terms;
  for (int s = 0; s < 4000; ++s) {
    const auto js = sample_q(r.state, rng);
    const LatentConfiguration<G> c{js.z, js.alpha, r.state.theta};
    terms.push_back(log_likelihood(y, c) + log_latent_prior<G>(js.z, r.state.theta) +
                    gaussian_log_density(js.alpha, cfg.priors.alpha_prior) - log_q(r.state, js));
  }
  const double elbo = mean(terms), se_elbo = sd(terms) / std::sqrt(terms.size());

  // Simple Monte Carlo over the prior for p(Y).
  std::vector<double> lik;
  for (int s = 0; s < 200000; ++s) {
    LatentConfiguration<G> c;
    c.alpha = 10.0 * standard_normal(rng);
    c.theta = r.state.theta;
    for (int i = 0; i < 3; ++i) c.z.push_back(sample_latent(r.state.theta, rng));
    lik.push_back(std::exp(log_likelihood(y, c)));
  }
  const double ml = mean(lik);
  const double se_log = sd(lik) / std::sqrt(lik.size()) / ml;
  const double log_evidence = std::log(ml);
  MESSAGE("ELBO " << elbo << " log p(Y) " << log_evidence);
  CHECK(elbo <= log_evidence + 3 * std::sqrt(se_elbo * se_elbo + se_log * se_log));
}

TEST_CASE("the Florentine ELBO has settled over the last fifth of a run") {
  const auto flo = read_edge_list_file(testsupport::data_path("florentine.txt"));
  BbviConfig cfg;
  cfg.latent_kappa = 2.5;
  const auto r = run_bbvi<Spherical>(flo, cfg);
  const auto& e = r.elbo_trace;
  REQUIRE(e.size() == 1000);
  const auto window = [&](std::size_t end) {
    return mean(std::vector<double>(e.begin() + static_cast<std::ptrdiff_t>(end - 50),
                                    e.begin() + static_cast<std::ptrdiff_t>(end)));
  };
  const auto noise = [&](std::size_t end) {
    return sd(std::vector<double>(e.begin() + static_cast<std::ptrdiff_t>(end - 50),
                                  e.begin() + static_cast<std::ptrdiff_t>(end))) /
           std::sqrt(50.0);
  };
  // Smoothed over 50 iterations, each window in the final 20% is no worse than
  // the previous one beyond its Monte Carlo noise.
  for (std::size_t end = 850; end <= 1000; end += 50) {
    const double tol = 3 * std::hypot(noise(end), noise(end - 50));
    CHECK(window(end) >= window(end - 50) - tol);
  }
  MESSAGE("ELBO window means: " << window(800) << " -> " << window(1000));
}
