#include "geolatnet/init.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>

#include "geolatnet/distributions.hpp"
#include "geolatnet/model.hpp"
#include "geolatnet/parallel.hpp"
#include "geolatnet/point_cloud.hpp"

namespace geolatnet {

std::vector<double> graph_distances(const Network& y) {
  const std::size_t n = y.size();
  constexpr double kUnreached = -1.0;
  std::vector<double> d(n * n, kUnreached);
  double max_finite = 0.0;
  for (std::size_t s = 0; s < n; ++s) {
    double* row = d.data() + s * n;
    row[s] = 0.0;
    std::deque<std::size_t> q{s};
    while (!q.empty()) {
      const std::size_t u = q.front();
      q.pop_front();
      const auto adj = y.row(u);
      for (std::size_t v = 0; v < n; ++v) {
        if (adj[v] && row[v] == kUnreached) {
          row[v] = row[u] + 1.0;
          max_finite = std::max(max_finite, row[v]);
          q.push_back(v);
        }
      }
    }
  }
  for (auto& v : d)
    if (v == kUnreached) v = max_finite + 1.0;
  return d;
}

template <class G>
double mds_stress(std::span<const double> target, std::span<const typename G::Point> z) {
  const std::size_t n = z.size();
  const PointCloud<G> cloud(z);
  std::vector<double> row(n);
  CompensatedSum s;
  for (std::size_t i = 0; i + 1 < n; ++i) {
    cloud.distances_from(cloud[i], i + 1, row);
    for (std::size_t j = i + 1; j < n; ++j) {
      const double r = row[j - i - 1] - target[i * n + j];
      s.add(r * r);
    }
  }
  return s.value();
}

namespace {

DiskPoint random_start(Hyperbolic, Rng& rng) { return sample_hyp_normal({DiskPoint{}, 1.0}, rng); }
SpherePoint random_start(Spherical, Rng& rng) { return sample_uniform_sphere(rng); }

// Riemannian gradient of d(a, b) with respect to a, as a tangent vector at a.
Vec2 riemannian_distance_gradient(const DiskPoint& a, const DiskPoint& b) {
  const Vec2 g = hyperbolic_distance_gradient(a, b);
  const double l = conformal_factor(a);
  return {g[0] / (l * l), g[1] / (l * l)};
}
Vec3 riemannian_distance_gradient(const SpherePoint& a, const SpherePoint& b) {
  return spherical_distance_gradient(a, b);
}

template <class G>
Embedding<G> descend(std::span<const double> target, std::vector<typename G::Point> z, const MdsOptions& opts) {
  using Point = typename G::Point;
  using Tangent = typename G::Tangent;
  const std::size_t n = z.size();
  Embedding<G> out;
  double f = mds_stress<G>(target, z);
  out.stress_history.push_back(f);
  std::vector<Tangent> grad(n);
  std::vector<Point> cand(n);
  for (int it = 1; it <= opts.max_iterations; ++it) {
    out.iterations = it;
    for (std::size_t i = 0; i < n; ++i) {
      Tangent g{};
      for (std::size_t j = 0; j < n; ++j) {
        if (j == i) continue;
        const double r = distance(z[i], z[j]) - target[i * n + j];
        const Tangent dg = riemannian_distance_gradient(z[i], z[j]);
        for (std::size_t k = 0; k < g.size(); ++k) g[k] += 2.0 * r * dg[k];
      }
      grad[i] = g;
    }
    double step = opts.initial_step;
    double fc = f;
    bool accepted = false;
    for (int h = 0; h < 50 && !accepted; ++h, step *= 0.5) {
      try {
        for (std::size_t i = 0; i < n; ++i) {
          Tangent v = grad[i];
          for (auto& c : v) c *= -step;
          cand[i] = exp_map(z[i], v);
        }
      } catch (const DomainError&) {
        continue;
      }
      fc = mds_stress<G>(target, cand);
      accepted = fc <= f;
    }
    if (!accepted) break;
    const double rel = (f - fc) / std::max(f, std::numeric_limits<double>::min());
    z.swap(cand);
    f = fc;
    out.stress_history.push_back(f);
    if (rel < opts.relative_tolerance) break;
  }
  out.z = std::move(z);
  out.stress = f;
  return out;
}

}  // namespace

template <class G>
Embedding<G> embed_mds(std::span<const double> target, std::size_t n, Rng& rng, const MdsOptions& opts) {
  if (target.size() != n * n) throw DomainError("distance matrix size does not match node count");
  const int restarts = std::max(1, opts.restarts);
  const std::uint64_t base = rng();
  std::vector<Embedding<G>> results(static_cast<std::size_t>(restarts));
  parallel_for(results.size(), [&](std::size_t r) {
    Rng local = derive_rng(base, r);
    std::vector<typename G::Point> z0(n);
    for (auto& p : z0) p = random_start(G{}, local);
    results[r] = descend<G>(target, std::move(z0), opts);
    results[r].restart = r;
  });
  std::size_t best = 0;
  for (std::size_t r = 1; r < results.size(); ++r)
    if (results[r].stress < results[best].stress) best = r;
  return std::move(results[best]);
}

std::vector<double> alpha_grid() {
  std::vector<double> g;
  g.reserve(201);
  for (int k = 0; k <= 200; ++k) g.push_back(static_cast<double>(k - 100) / 10.0);
  return g;
}

template <class G>
double grid_search_alpha(const Network& y, std::span<const typename G::Point> z) {
  const std::size_t n = y.size();
  const auto d = distance_matrix(PointCloud<G>(z));
  double best_alpha = 0.0;
  double best = -std::numeric_limits<double>::infinity();
  for (double a : alpha_grid()) {
    CompensatedSum s;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j) s.add(dyad_log_likelihood(y.edge(i, j), a - d[i * n + j]));
    const double v = s.value();
    if (v > best || (v == best && std::abs(a) < std::abs(best_alpha))) {
      best = v;
      best_alpha = a;
    }
  }
  return best_alpha;
}

template <class G>
StartingState<G> starting_state(const Network& y, const LatentParams<G>& theta, std::optional<AnchorSpec> anchors,
                                Rng& rng, const MdsOptions& opts) {
  const std::size_t n = y.size();
  if (n < 3) throw TooFewNodes("inference needs at least 3 nodes");
  const auto target = graph_distances(y);
  auto emb = embed_mds<G>(target, n, rng, opts);
  LatentConfiguration<G> raw;
  raw.z = std::move(emb.z);
  raw.theta = theta;
  StartingState<G> out;
  if (anchors) {
    out.anchors = *anchors;
    out.cfg = canonicalize(raw, *anchors);
  } else {
    auto [a, cfg] = canonicalize_with_fallback(y, raw);
    out.anchors = a;
    out.cfg = std::move(cfg);
  }
  out.cfg.theta = theta;
  out.cfg.theta.mu = canonical_first(G{});
  out.cfg.alpha = grid_search_alpha<G>(y, out.cfg.z);
  out.stress = emb.stress;
  return out;
}

#define GEOLATNET_INSTANTIATE(G)                                                                        \
  template double mds_stress<G>(std::span<const double>, std::span<const typename G::Point>);          \
  template Embedding<G> embed_mds<G>(std::span<const double>, std::size_t, Rng&, const MdsOptions&); \
  template double grid_search_alpha<G>(const Network&, std::span<const typename G::Point>);      \
  template StartingState<G> starting_state<G>(const Network&, const LatentParams<G>&,               \
                                              std::optional<AnchorSpec>, Rng&, const MdsOptions&);

GEOLATNET_INSTANTIATE(Hyperbolic)
GEOLATNET_INSTANTIATE(Spherical)

#undef GEOLATNET_INSTANTIATE

}  // namespace geolatnet
