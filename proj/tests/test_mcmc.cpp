#include <doctest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "geolatnet/errors.hpp"
#include "geolatnet/io.hpp"
#include "geolatnet/mcmc.hpp"
#include "support.hpp"

using namespace geolatnet;

namespace {

template <class G>
LatentConfiguration<G> canonical_start(std::size_t n, double scale) {
  LatentConfiguration<G> c;
  c.z.push_back(canonical_first(G{}));
  c.z.push_back(canonical_second(G{}, 0.5));
  if constexpr (std::is_same_v<G, Hyperbolic>) {
    c.z.push_back(DiskPoint(0.1, 0.3));
    for (std::size_t i = 3; i < n; ++i) c.z.push_back(DiskPoint(-0.2, 0.1 * static_cast<double>(i) - 0.4));
    c.theta.sigma = scale;
  } else {
    c.z.push_back(SpherePoint(0.2, 0.5, 0.6));
    for (std::size_t i = 3; i < n; ++i) c.z.push_back(SpherePoint(-0.4, 0.1 * static_cast<double>(i), 0.5));
    c.theta.kappa = scale;
  }
  c.theta.mu = canonical_first(G{});
  return c;
}

double mean(std::span<const double> x) {
  double s = 0.0;
  for (double v : x) s += v;
  return s / static_cast<double>(x.size());
}

double sd(std::span<const double> x) {
  const double m = mean(x);
  double s = 0.0;
  for (double v : x) s += (v - m) * (v - m);
  return std::sqrt(s / static_cast<double>(x.size() - 1));
}

}  // namespace

TEST_CASE("configuration validation") {
  McmcConfig c;
  CHECK_NOTHROW(c.validate());
  c.alpha_step = 0.0;
  CHECK_THROWS_AS(c.validate(), ConfigError);
  c = McmcConfig{};
  c.thin = 0;
  CHECK_THROWS_AS(c.validate(), ConfigError);
  c = McmcConfig{};
  c.latent_sigma = 6.0;
  CHECK_THROWS_AS(c.validate(), ConfigError);
}

TEST_CASE_TEMPLATE("zero-width proposals are accepted and leave the state unchanged", G, Hyperbolic, Spherical) {
  Network y(5);
  y.set_edge(0, 1, true);
  y.set_edge(2, 3, true);
  McmcConfig cfg;
  cfg.alpha_step = 0.0;
  cfg.latent_step = 0.0;
  const auto start = canonical_start<G>(5, 1.0);
  McmcChain<G> chain(y, start, AnchorSpec{0, 1, 2}, cfg, Rng(1));
  CHECK(chain.mh_update_alpha());
  CHECK(chain.state().alpha == start.alpha);
  for (std::size_t i = 1; i < 5; ++i) {
    CHECK(chain.mh_update_latent(i));
    CHECK(chain.state().z[i] == start.z[i]);
  }
  CHECK_THROWS_AS(chain.mh_update_latent(0), DomainError);
}

TEST_CASE("an alpha move that raises the posterior is always accepted") {
  // Complete graph with coincident-ish points: larger alpha is strictly better.
  Network y(4);
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t j = i + 1; j < 4; ++j) y.set_edge(i, j, true);
  auto start = canonical_start<Hyperbolic>(4, 1.0);
  start.alpha = -5.0;
  McmcConfig cfg;
  cfg.alpha_step = 1e-3;
  McmcChain<Hyperbolic> chain(y, start, AnchorSpec{0, 1, 2}, cfg, Rng(2));
  int upward = 0;
  for (int k = 0; k < 200; ++k) {
    // The proposal's innovation is the chain's next normal draw.
    Rng peek = chain.rng();
    const double step = standard_normal(peek);
    const bool acc = chain.mh_update_alpha();
    if (step > 0) {
      ++upward;
      CHECK(acc);
    }
  }
  CHECK(upward > 50);
}

TEST_CASE("non-canonical starts are rejected") {
  auto start = canonical_start<Hyperbolic>(4, 1.0);
  start.z[0] = DiskPoint(0.1, 0.0);
  CHECK_THROWS_AS(McmcChain<Hyperbolic>(Network(4), start, AnchorSpec{0, 1, 2}, McmcConfig{}, Rng(1)),
                  DegenerateAnchors);
}

TEST_CASE_TEMPLATE("chains are seeded, keep the anchors and track the posterior", G, Hyperbolic, Spherical) {
  const auto kar = read_edge_list_file(testsupport::data_path("karate.txt"));
  McmcConfig cfg;
  cfg.iterations = 300;
  cfg.thin = 3;
  cfg.self_check_every = 1;
  cfg.update_theta_z = true;
  cfg.update_prior_params = true;
  cfg.seed = 5;
  const auto a = run_mcmc<G>(kar, cfg);
  const auto b = run_mcmc<G>(kar, cfg);
  CHECK(a.alpha_samples == b.alpha_samples);
  CHECK(a.z_samples == b.z_samples);
  CHECK(a.size() == 100);
  CHECK(a.iterations.front() == 3);
  CHECK(a.iterations.back() == 300);
  CHECK(a.loglik_samples.size() == a.size());
  CHECK(a.theta_samples.size() == a.size());
  for (const auto& z : a.z_samples) CHECK(satisfies_anchor_constraints<G>(z, a.anchors));
  for (std::size_t k = 0; k < a.size(); ++k) {
    LatentConfiguration<G> c{a.z_samples[k], a.alpha_samples[k], a.theta_samples[k]};
    CHECK(a.loglik_samples[k] == doctest::Approx(log_likelihood(kar, c)).epsilon(1e-10));
  }
  cfg.seed = 6;
  CHECK(run_mcmc<G>(kar, cfg).alpha_samples != a.alpha_samples);
}

TEST_CASE("the second anchor stays on its geodesic at every sweep") {
  const auto flo = read_edge_list_file(testsupport::data_path("florentine.txt"));
  Rng init(1);
  const auto start = starting_state<Spherical>(flo, VmfParams{SpherePoint(), 2.5}, std::nullopt, init);
  McmcChain<Spherical> chain(flo, start.cfg, start.anchors, McmcConfig{}, Rng(2));
  for (int k = 0; k < 2000; ++k) {
    chain.sweep();
    const auto& z2 = chain.state().z[start.anchors.i2];
    CHECK(std::abs(z2.y()) <= 1e-12);
    CHECK(z2.x() > 0.0);
    CHECK(chain.state().z[start.anchors.i1] == canonical_first(Spherical{}));
    CHECK(chain.state().z[start.anchors.i3].y() > 0.0);
  }
  CHECK(std::abs(chain.log_posterior() - chain.recompute_log_posterior()) < 1e-8 * std::abs(chain.log_posterior()));
}

TEST_CASE("spherical traces respect the likelihood upper bound") {
  const auto flo = read_edge_list_file(testsupport::data_path("florentine.txt"));
  McmcConfig cfg;
  cfg.iterations = 2000;
  const auto tr = run_mcmc<Spherical>(flo, cfg);
  for (std::size_t k = 0; k < tr.size(); ++k) {
    double bound = 0.0;
    for (std::size_t i = 0; i < flo.size(); ++i)
      for (std::size_t j = i + 1; j < flo.size(); ++j)
        bound += flo.edge(i, j) ? dyad_log_likelihood(true, tr.alpha_samples[k])
                                : dyad_log_likelihood(false, tr.alpha_samples[k] - std::numbers::pi);
    CHECK(tr.loglik_samples[k] <= bound + 1e-9);
  }
}

TEST_CASE("default step sizes give moderate acceptance on Florentine") {
  const auto flo = read_edge_list_file(testsupport::data_path("florentine.txt"));
  McmcConfig cfg;
  cfg.iterations = 5000;
  const auto tr = run_mcmc<Spherical>(flo, cfg);
  CHECK(tr.acceptance.alpha > 0.1);
  CHECK(tr.acceptance.alpha < 0.7);
  CHECK(tr.acceptance.latent > 0.1);
  CHECK(tr.acceptance.latent < 0.7);
  MESSAGE("acceptance alpha " << tr.acceptance.alpha << " latent " << tr.acceptance.latent << " anchor "
                              << tr.acceptance.anchor);
}

TEST_CASE_TEMPLATE("without data the sampler reproduces the latent prior", G, Hyperbolic, Spherical) {
  constexpr bool hyp = std::is_same_v<G, Hyperbolic>;
  const double scale = hyp ? 0.8 : 2.5;
  const std::size_t n = 5;
  McmcConfig cfg;
  cfg.include_likelihood = false;
  cfg.iterations = 100000;
  cfg.thin = 10;
  cfg.seed = 3;
  const auto tr = run_mcmc<G>(Network(n), canonical_start<G>(n, scale), AnchorSpec{0, 1, 2}, cfg);

  // Free nodes: Frechet mean at the prior mean.
  for (std::size_t i = 3; i < n; ++i) {
    std::vector<typename G::Point> pts;
    for (const auto& z : tr.z_samples) pts.push_back(z[i]);
    const auto m = frechet_mean(std::span<const typename G::Point>(pts));
    CHECK(distance(m.point, canonical_first(G{})) < 0.05);
  }

  // Second anchor: geodesic distance t from the first anchor has density
  // proportional to the prior along the geodesic.
  std::vector<double> t;
  for (const auto& z : tr.z_samples) t.push_back(distance(z[0], z[1]));
  double oracle = 0.0;
  if constexpr (hyp) {
    oracle = scale * std::sqrt(2.0 / std::numbers::pi);
  } else {
    const auto w = [&](double s) { return std::exp(scale * std::cos(s)); };
    oracle = testsupport::simpson([&](double s) { return s * w(s); }, 0, std::numbers::pi) /
             testsupport::simpson(w, 0, std::numbers::pi);
  }
  const double mcse = sd(t) / std::sqrt(effective_sample_size(t));
  CHECK(std::abs(mean(t) - oracle) < 4 * mcse);

  // Alpha: the N(0, 10) prior.
  const double mcse_a = sd(tr.alpha_samples) / std::sqrt(effective_sample_size(tr.alpha_samples));
  CHECK(std::abs(mean(tr.alpha_samples)) < 4 * mcse_a);
}

TEST_CASE("effective sample size") {
  Rng rng(1);
  std::vector<double> iid(10000);
  for (auto& v : iid) v = standard_normal(rng);
  const double r = effective_sample_size(iid) / 10000;
  CHECK(r > 0.8);
  CHECK(r < 1.2);

  CHECK(effective_sample_size(std::vector<double>(50, 3.0)) == 1.0);

  std::vector<double> ar(100000);
  double x = 0.0;
  for (auto& v : ar) v = x = 0.5 * x + standard_normal(rng);
  CHECK(effective_sample_size(ar) / ar.size() == doctest::Approx(1.0 / 3.0).epsilon(0.2));

  CHECK_THROWS(effective_sample_size(std::vector<double>(9, 1.0)));
}
