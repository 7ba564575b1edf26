#pragma once

// Starting values for inference: hop-count distances, a stress-descent
// embedding on the chosen manifold and a grid search for the base rate.

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "geolatnet/geometry.hpp"
#include "geolatnet/identifiability.hpp"
#include "geolatnet/model.hpp"
#include "geolatnet/network.hpp"
#include "geolatnet/random.hpp"

namespace geolatnet {

// Row-major N x N hop counts. Unreachable pairs get (largest finite hop count + 1).
std::vector<double> graph_distances(const Network& y);

template <class G>
double mds_stress(std::span<const double> target, std::span<const typename G::Point> z);

struct MdsOptions {
  int restarts = 5;
  int max_iterations = 2000;
  double initial_step = 0.1;
  double relative_tolerance = 1e-8;
};

template <class G>
struct Embedding {
  std::vector<typename G::Point> z;
  double stress = 0.0;
  int iterations = 0;
  std::size_t restart = 0;
  std::vector<double> stress_history;  // accepted iterates of the winning restart
};

// Minimizes raw stress sum_{i<j} (d(z_i, z_j) - D_ij)^2 by Riemannian gradient
// descent with backtracking; keeps the best of several random restarts.
template <class G>
Embedding<G> embed_mds(std::span<const double> target, std::size_t n, Rng& rng, const MdsOptions& opts = {});

// Grid {-10, -9.9, ..., 10}; returns the likelihood-maximizing value, ties toward 0.
template <class G>
double grid_search_alpha(const Network& y, std::span<const typename G::Point> z);

std::vector<double> alpha_grid();

template <class G>
struct StartingState {
  LatentConfiguration<G> cfg;
  AnchorSpec anchors;
  double stress = 0.0;
};

// Hop distances -> stress embedding -> canonical anchor frame -> alpha grid
// search. theta_z keeps the given scale with its mean at the first anchor.
// With explicit anchors a degenerate triple throws; otherwise the degree
// order fallback is used.
template <class G>
StartingState<G> starting_state(const Network& y, const LatentParams<G>& theta, std::optional<AnchorSpec> anchors,
                                Rng& rng, const MdsOptions& opts = {});

}  // namespace geolatnet
