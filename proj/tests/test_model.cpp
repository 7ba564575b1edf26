#include <doctest.h>

#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

#include "geolatnet/errors.hpp"
#include "geolatnet/io.hpp"
#include "geolatnet/model.hpp"
#include "support.hpp"

using namespace geolatnet;

namespace {

// Product of Bernoulli pmfs over all dyads, in log space, written directly.
template <class P>
double brute_loglik(const Network& y, const std::vector<P>& z, double alpha) {
  double s = 0.0;
  for (std::size_t i = 0; i < z.size(); ++i)
    for (std::size_t j = i + 1; j < z.size(); ++j) {
      const double p = 1.0 / (1.0 + std::exp(-(alpha - distance(z[i], z[j]))));
      s += std::log(y.edge(i, j) ? p : 1.0 - p);
    }
  return s;
}

Network random_network(std::size_t n, double density, Rng& rng) {
  Network y(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (uniform01(rng) < density) y.set_edge(i, j, true);
  return y;
}

}  // namespace

TEST_CASE("edge probability") {
  CHECK(edge_probability(0.0, 0.0) == 0.5);
  CHECK(std::abs(edge_probability(50.0, 0.0) - 1.0) < 1e-15);
  CHECK(edge_probability(-0.53, 1.0) == doctest::Approx(1.0 / (1.0 + std::exp(1.53))).epsilon(1e-14));
  CHECK(edge_probability(-0.53, 1.0) == doctest::Approx(0.1779).epsilon(1e-3));
  CHECK(edge_probability(-800.0, 0.0) >= 0.0);
  CHECK(dyad_log_likelihood(true, -800.0) == doctest::Approx(-800.0));
  CHECK(std::isfinite(dyad_log_likelihood(false, 800.0)));
}

TEST_CASE("compensated summation") {
  CompensatedSum s;
  s.add(1e16);
  for (int k = 0; k < 1000; ++k) s.add(1.0);
  s.add(-1e16);
  CHECK(s.value() == 1000.0);
}

TEST_CASE("log likelihood against brute force") {
  Network two(2);
  two.set_edge(0, 1, true);
  LatentConfiguration<Hyperbolic> c2{{DiskPoint(0.1, 0.1), DiskPoint(0.1, 0.1)}, 0.0, {}};
  CHECK(log_likelihood(two, c2) == doctest::Approx(std::log(0.5)).epsilon(1e-15));

  Network empty(10);
  LatentConfiguration<Spherical> ce;
  ce.alpha = -50;
  ce.z.assign(10, SpherePoint());
  CHECK(std::abs(log_likelihood(empty, ce)) < 1e-15 * 45 + 1e-18);

  Rng rng(13);
  for (int rep = 0; rep < 50; ++rep) {
    const std::size_t n = 4 + rep % 9;
    const auto y = random_network(n, 0.4, rng);
    std::vector<DiskPoint> zd;
    std::vector<SpherePoint> zs;
    for (std::size_t i = 0; i < n; ++i) {
      zd.push_back(testsupport::random_disk(rng, 0.9));
      zs.push_back(testsupport::random_sphere(rng));
    }
    const double alpha = 3 * standard_normal(rng);
    const double ld = log_likelihood(y, LatentConfiguration<Hyperbolic>{zd, alpha, {}});
    const double ls = log_likelihood(y, LatentConfiguration<Spherical>{zs, alpha, {}});
    CHECK(std::abs(ld - brute_loglik(y, zd, alpha)) < 1e-12 * std::max(1.0, std::abs(ld)));
    CHECK(std::abs(ls - brute_loglik(y, zs, alpha)) < 1e-12 * std::max(1.0, std::abs(ls)));
  }
}

TEST_CASE("log likelihood is invariant under isometries") {
  Rng rng(17);
  const auto y = random_network(20, 0.3, rng);
  for (int rep = 0; rep < 50; ++rep) {
    LatentConfiguration<Hyperbolic> d;
    LatentConfiguration<Spherical> s;
    d.alpha = s.alpha = standard_normal(rng);
    for (int i = 0; i < 20; ++i) {
      d.z.push_back(testsupport::random_disk(rng, 0.9));
      s.z.push_back(testsupport::random_sphere(rng));
    }
    const auto hiso = MoebiusIsometry::make(std::polar(1.0, 6.0 * uniform01(rng)), testsupport::random_disk(rng, 0.8),
                                            rep % 2 == 0);
    const SphereIsometry siso{6 * uniform01(rng), 6 * uniform01(rng), 6 * uniform01(rng), rep % 2 == 1};
    auto d2 = d;
    auto s2 = s;
    for (auto& p : d2.z) p = apply(hiso, p);
    for (auto& p : s2.z) p = apply(siso, p);
    CHECK(std::abs(log_likelihood(y, d) - log_likelihood(y, d2)) < 1e-9);
    CHECK(std::abs(log_likelihood(y, s) - log_likelihood(y, s2)) < 1e-9);
  }
}

TEST_CASE("log likelihood falls when a linked pair moves apart") {
  Network y(3);
  y.set_edge(0, 1, true);
  LatentConfiguration<Hyperbolic> c{{DiskPoint(0, 0), DiskPoint(0.2, 0), DiskPoint(0, 0.3)}, 0.5, {}};
  const double before = log_likelihood(y, c);
  c.z[1] = DiskPoint(0.4, 0);
  CHECK(log_likelihood(y, c) < before);
}

TEST_CASE("log posterior composes the prior terms") {
  Network y(3);
  y.set_edge(0, 1, true);
  y.set_edge(1, 2, true);
  const PriorSpec priors{};
  LatentConfiguration<Hyperbolic> c{{DiskPoint(0, 0), DiskPoint(0.3, 0), DiskPoint(-0.1, 0.4)}, 0.7,
                                    HyperbolicNormalParams{DiskPoint(0.1, 0.05), 1.3}};
  // Hand-composed: likelihood, hyperbolic Normal densities, N(0, 10) on alpha,
  // uniform mu on the radius-1 hyperbolic disc and uniform sigma on (0, 5].
  const double pi = std::numbers::pi;
  double oracle = brute_loglik(y, c.z, c.alpha);
  const double logZ = std::log(2 * pi * std::sqrt(pi / 2) * 1.3 * std::exp(1.3 * 1.3 / 2) * std::erf(1.3 / std::sqrt(2.0)));
  for (const auto& z : c.z) {
    const double d = testsupport::hyperboloid_distance(z, c.theta.mu);
    oracle += -logZ - d * d / (2 * 1.3 * 1.3);
  }
  oracle += -0.5 * std::log(2 * pi * 100.0) - 0.7 * 0.7 / 200.0;
  oracle += -std::log(2 * pi * (std::cosh(1.0) - 1.0)) - std::log(5.0);
  CHECK(log_posterior(y, c, priors) == doctest::Approx(oracle).epsilon(1e-10));

  const double diff = log_posterior(y, c, priors) - log_likelihood(y, c);
  CHECK(diff == doctest::Approx(log_latent_prior<Hyperbolic>(c.z, c.theta) +
                                gaussian_log_density(c.alpha, priors.alpha_prior) + log_theta_prior(c.theta, priors))
                    .epsilon(1e-13));

  // Outside the support.
  auto bad = c;
  bad.theta.sigma = 6.0;
  CHECK(std::isinf(log_posterior(y, bad, priors)));
  bad.theta = HyperbolicNormalParams{DiskPoint(0.9, 0.0), 1.0};
  CHECK(std::isinf(log_posterior(y, bad, priors)));

  LatentConfiguration<Spherical> s{{SpherePoint(0, 0, 1), SpherePoint(1, 0, 1), SpherePoint(0, 1, 0)}, -0.2,
                                   VmfParams{SpherePoint(0, 0, 1), 2.5}};
  const double sdiff = log_posterior(y, s, priors) - log_likelihood(y, s) - log_latent_prior<Spherical>(s.z, s.theta) -
                       gaussian_log_density(s.alpha, priors.alpha_prior);
  CHECK(sdiff == doctest::Approx(-std::log(4 * pi) - std::log(10.0) - 0.25).epsilon(1e-13));
}

TEST_CASE("spherical log likelihood has the traceplot upper bound") {
  Rng rng(5);
  const auto y = random_network(15, 0.2, rng);
  for (int rep = 0; rep < 200; ++rep) {
    LatentConfiguration<Spherical> c;
    c.alpha = 2 * standard_normal(rng);
    for (int i = 0; i < 15; ++i) c.z.push_back(testsupport::random_sphere(rng));
    // Each dyad term is at most max over d in [0, pi] of its Bernoulli log pmf.
    double bound = 0.0;
    for (std::size_t i = 0; i < 15; ++i)
      for (std::size_t j = i + 1; j < 15; ++j)
        bound += y.edge(i, j) ? dyad_log_likelihood(true, c.alpha) : dyad_log_likelihood(false, c.alpha - std::numbers::pi);
    CHECK(log_likelihood(y, c) <= bound + 1e-12);
  }
}

TEST_CASE("network sampling") {
  Rng rng(21);
  for (int t = 0; t < 10; ++t) {
    CHECK(sample_network<Hyperbolic>(-50.0, HyperbolicNormalParams{}, 20, rng).y.edge_count() == 0);
    CHECK(sample_network<Spherical>(50.0, VmfParams{}, 20, rng).y.edge_count() == 190);
    CHECK(sample_network<Hyperbolic>(50.0, HyperbolicNormalParams{DiskPoint(), 0.5}, 20, rng).y.edge_count() == 190);
  }
  CHECK_THROWS_AS(sample_network<Spherical>(0.0, VmfParams{}, 1, rng), TooFewNodes);

  Rng a(77), b(77);
  const auto s1 = sample_network<Spherical>(0.5, VmfParams{SpherePoint(), 3.0}, 25, a);
  const auto s2 = sample_network<Spherical>(0.5, VmfParams{SpherePoint(), 3.0}, 25, b);
  CHECK(s1.y == s2.y);
  CHECK(s1.cfg.z == s2.cfg.z);

  // Edge frequencies at a fixed configuration.
  LatentConfiguration<Hyperbolic> cfg{{DiskPoint(0, 0), DiskPoint(0.3, 0), DiskPoint(-0.4, 0.2), DiskPoint(0.1, -0.6),
                                       DiskPoint(0.5, 0.5)},
                                      0.8,
                                      {}};
  std::vector<double> counts(25, 0.0);
  const int draws = 10000;
  for (int t = 0; t < draws; ++t) {
    const auto y = sample_edges(cfg, rng);
    for (std::size_t i = 0; i < 5; ++i)
      for (std::size_t j = i + 1; j < 5; ++j) counts[i * 5 + j] += y.edge(i, j);
  }
  for (std::size_t i = 0; i < 5; ++i)
    for (std::size_t j = i + 1; j < 5; ++j) {
      const double p = edge_probability(cfg.alpha, hyperbolic_distance(cfg.z[i], cfg.z[j]));
      const double se = std::sqrt(p * (1 - p) / draws);
      CHECK(std::abs(counts[i * 5 + j] / draws - p) < 3.5 * se);
    }

  // Density band for a spherical graph.
  const auto g = sample_network<Spherical>(1.0, VmfParams{SpherePoint(), 5.0}, 30, rng);
  const double density = static_cast<double>(g.y.edge_count()) / g.y.dyad_count();
  CHECK(density > 0.05);
  CHECK(density < 0.95);
}

TEST_CASE("the bundled data sets load with their expected sizes") {
  const auto flo = read_edge_list_file(testsupport::data_path("florentine.txt"));
  CHECK(flo.size() == 15);
  CHECK(flo.edge_count() == 20);
  const auto kar = read_edge_list_file(testsupport::data_path("karate.txt"));
  CHECK(kar.size() == 34);
  CHECK(kar.edge_count() == 78);
}
