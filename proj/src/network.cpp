#include "geolatnet/network.hpp"

#include <numeric>
#include <string>

#include "geolatnet/errors.hpp"

namespace geolatnet {

Network Network::from_edges(std::size_t n, std::span<const std::pair<std::size_t, std::size_t>> edges) {
  Network g(n);
  for (const auto& [i, j] : edges) g.set_edge(i, j, true);
  return g;
}

void Network::set_edge(std::size_t i, std::size_t j, bool present) {
  if (i >= n_ || j >= n_) throw DomainError("edge (" + std::to_string(i) + ", " + std::to_string(j) + ") out of range");
  if (i == j) throw DomainError("self ties are not allowed (node " + std::to_string(i) + ")");
  const bool had = edge(i, j);
  if (had == present) return;
  adj_[i * n_ + j] = adj_[j * n_ + i] = present ? 1 : 0;
  edges_ = present ? edges_ + 1 : edges_ - 1;
}

std::size_t Network::degree(std::size_t i) const noexcept {
  const auto r = row(i);
  return std::accumulate(r.begin(), r.end(), std::size_t{0});
}

std::vector<std::pair<std::size_t, std::size_t>> Network::edges() const {
  std::vector<std::pair<std::size_t, std::size_t>> out;
  out.reserve(edges_);
  for (std::size_t i = 0; i < n_; ++i)
    for (std::size_t j = i + 1; j < n_; ++j)
      if (edge(i, j)) out.emplace_back(i, j);
  return out;
}

}  // namespace geolatnet
