#pragma once

// Posterior-predictive link probabilities, class separation and per-node
// Frechet-mean summaries.

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "geolatnet/bbvi.hpp"
#include "geolatnet/mcmc.hpp"
#include "geolatnet/network.hpp"
#include "geolatnet/random.hpp"

namespace geolatnet {

struct PredictiveRecord {
  std::size_t i = 0;  // 0-based, i < j
  std::size_t j = 0;
  bool y = false;
  double mean_p = 0.0;
};

// Mean over samples of p_ij for every dyad, in (i, j) lexicographic order.
template <class G>
std::vector<PredictiveRecord> posterior_predictive_probs(const Network& y, std::span<const double> alphas,
                                                         std::span<const std::vector<typename G::Point>> zs);

// Uses the samples after the first `burnin` stored ones.
template <class G>
std::vector<PredictiveRecord> posterior_predictive_probs(const Network& y, const McmcTrace<G>& trace,
                                                         std::size_t burnin = 0);

// Averages over `draws` joint samples from q.
template <class G>
std::vector<PredictiveRecord> posterior_predictive_probs(const Network& y, const VariationalState<G>& q,
                                                         std::size_t draws, Rng& rng);

struct SeparationStats {
  double mean_p_link = 0.0;
  double mean_p_nonlink = 0.0;
  double auc = 0.5;
  std::size_t links = 0;
  std::size_t nonlinks = 0;
};

// Throws SingleClass when only one label is present.
SeparationStats separation_stats(std::span<const PredictiveRecord> records);

// Rank-based AUC with average ranks for ties.
double auc(std::span<const double> scores, std::span<const std::uint8_t> labels);

template <class G>
struct LatentSummary {
  std::vector<typename G::Point> mean;
  std::vector<double> dispersion;  // mean squared geodesic distance to the mean
};

template <class G>
LatentSummary<G> summarize_latent(std::span<const std::vector<typename G::Point>> samples);

}  // namespace geolatnet
