#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

namespace geolatnet {

// Undirected binary network without self ties. Stored as a dense symmetric
// byte matrix so that a node's row can be streamed by the dyad kernels.
class Network {
 public:
  Network() = default;
  explicit Network(std::size_t n) : n_(n), adj_(n * n, 0) {}

  // Edges are 0-based pairs; self loops are rejected, duplicates ignored.
  static Network from_edges(std::size_t n, std::span<const std::pair<std::size_t, std::size_t>> edges);

  std::size_t size() const noexcept { return n_; }
  std::size_t dyad_count() const noexcept { return n_ * (n_ - (n_ > 0)) / 2; }
  std::size_t edge_count() const noexcept { return edges_; }

  bool edge(std::size_t i, std::size_t j) const noexcept { return adj_[i * n_ + j] != 0; }
  void set_edge(std::size_t i, std::size_t j, bool present);

  std::span<const std::uint8_t> row(std::size_t i) const noexcept { return {adj_.data() + i * n_, n_}; }
  std::size_t degree(std::size_t i) const noexcept;

  // Sorted (i < j) 0-based edge list.
  std::vector<std::pair<std::size_t, std::size_t>> edges() const;

  friend bool operator==(const Network&, const Network&) = default;

 private:
  std::size_t n_ = 0;
  std::size_t edges_ = 0;
  std::vector<std::uint8_t> adj_;
};

}  // namespace geolatnet
