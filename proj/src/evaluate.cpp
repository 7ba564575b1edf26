#include "geolatnet/evaluate.hpp"

#include <algorithm>
#include <numeric>

#include "geolatnet/errors.hpp"
#include "geolatnet/point_cloud.hpp"

namespace geolatnet {

template <class G>
std::vector<PredictiveRecord> posterior_predictive_probs(const Network& y, std::span<const double> alphas,
                                                         std::span<const std::vector<typename G::Point>> zs) {
  if (alphas.empty() || alphas.size() != zs.size())
    throw DomainError("predictive probabilities need >= 1 sample with matching alpha and Z");
  const std::size_t n = y.size();
  std::vector<CompensatedSum> sums(n * (n - 1) / 2);
  std::vector<double> row(n);
  for (std::size_t s = 0; s < alphas.size(); ++s) {
    if (zs[s].size() != n) throw DomainError("sample size does not match the network");
    const PointCloud<G> cloud(zs[s]);
    std::size_t k = 0;
    for (std::size_t i = 0; i + 1 < n; ++i) {
      cloud.distances_from(cloud[i], i + 1, row);
      for (std::size_t j = i + 1; j < n; ++j) sums[k++].add(edge_probability(alphas[s], row[j - i - 1]));
    }
  }
  std::vector<PredictiveRecord> out;
  out.reserve(sums.size());
  const double inv = 1.0 / static_cast<double>(alphas.size());
  std::size_t k = 0;
  for (std::size_t i = 0; i + 1 < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) out.push_back({i, j, y.edge(i, j), sums[k++].value() * inv});
  return out;
}

template <class G>
std::vector<PredictiveRecord> posterior_predictive_probs(const Network& y, const McmcTrace<G>& trace,
                                                         std::size_t burnin) {
  if (burnin >= trace.size()) throw DomainError("burn-in discards every stored sample");
  return posterior_predictive_probs<G>(y, std::span(trace.alpha_samples).subspan(burnin),
                                       std::span(trace.z_samples).subspan(burnin));
}

template <class G>
std::vector<PredictiveRecord> posterior_predictive_probs(const Network& y, const VariationalState<G>& q,
                                                         std::size_t draws, Rng& rng) {
  std::vector<double> alphas;
  std::vector<std::vector<typename G::Point>> zs;
  alphas.reserve(draws);
  zs.reserve(draws);
  for (std::size_t s = 0; s < draws; ++s) {
    auto js = sample_q(q, rng);
    alphas.push_back(js.alpha);
    zs.push_back(std::move(js.z));
  }
  return posterior_predictive_probs<G>(y, alphas, zs);
}

double auc(std::span<const double> scores, std::span<const std::uint8_t> labels) {
  const std::size_t n = scores.size();
  if (labels.size() != n) throw DomainError("scores and labels differ in length");
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return scores[a] < scores[b]; });
  double rank_sum = 0.0;
  std::size_t pos = 0, neg = 0;
  for (std::size_t k = 0; k < n;) {
    std::size_t e = k;
    while (e < n && scores[order[e]] == scores[order[k]]) ++e;
    const double avg_rank = (static_cast<double>(k + 1) + static_cast<double>(e)) / 2.0;
    for (std::size_t t = k; t < e; ++t) {
      if (labels[order[t]]) {
        rank_sum += avg_rank;
        ++pos;
      } else {
        ++neg;
      }
    }
    k = e;
  }
  if (pos == 0 || neg == 0) throw SingleClass("AUC needs both classes");
  const double p = static_cast<double>(pos), q = static_cast<double>(neg);
  return (rank_sum - p * (p + 1.0) / 2.0) / (p * q);
}

SeparationStats separation_stats(std::span<const PredictiveRecord> records) {
  SeparationStats st;
  CompensatedSum link, nonlink;
  std::vector<double> scores;
  std::vector<std::uint8_t> labels;
  scores.reserve(records.size());
  for (const auto& r : records) {
    scores.push_back(r.mean_p);
    labels.push_back(r.y);
    if (r.y) {
      link.add(r.mean_p);
      ++st.links;
    } else {
      nonlink.add(r.mean_p);
      ++st.nonlinks;
    }
  }
  if (st.links == 0 || st.nonlinks == 0) throw SingleClass("all dyads share one label");
  st.mean_p_link = link.value() / static_cast<double>(st.links);
  st.mean_p_nonlink = nonlink.value() / static_cast<double>(st.nonlinks);
  st.auc = auc(scores, labels);
  return st;
}

template <class G>
LatentSummary<G> summarize_latent(std::span<const std::vector<typename G::Point>> samples) {
  if (samples.empty()) throw DomainError("summarize_latent needs at least one sample");
  const std::size_t n = samples.front().size();
  LatentSummary<G> out;
  out.mean.reserve(n);
  out.dispersion.reserve(n);
  std::vector<typename G::Point> pts(samples.size());
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t s = 0; s < samples.size(); ++s) pts[s] = samples[s][i];
    const auto fm = frechet_mean(std::span<const typename G::Point>(pts));
    out.mean.push_back(fm.point);
    out.dispersion.push_back(fm.objective);
  }
  return out;
}

#define GEOLATNET_INSTANTIATE(G)                                                                               \
  template std::vector<PredictiveRecord> posterior_predictive_probs<G>(                                        \
      const Network&, std::span<const double>, std::span<const std::vector<typename G::Point>>);               \
  template std::vector<PredictiveRecord> posterior_predictive_probs<G>(const Network&, const McmcTrace<G>&,    \
                                                                       std::size_t);                           \
  template std::vector<PredictiveRecord> posterior_predictive_probs<G>(const Network&,                         \
                                                                       const VariationalState<G>&, std::size_t, \
                                                                       Rng&);                                  \
  template LatentSummary<G> summarize_latent<G>(std::span<const std::vector<typename G::Point>>);

GEOLATNET_INSTANTIATE(Hyperbolic)
GEOLATNET_INSTANTIATE(Spherical)

#undef GEOLATNET_INSTANTIATE

}  // namespace geolatnet
