#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace geolatnet {

// All samplers take an explicit engine; identical seeds give identical draws.
using Rng = std::mt19937_64;

inline double uniform01(Rng& rng) { return std::uniform_real_distribution<double>(0.0, 1.0)(rng); }

// Uniform on (0, 1], safe for log().
inline double uniform_open0(Rng& rng) { return 1.0 - uniform01(rng); }

inline double standard_normal(Rng& rng) { return std::normal_distribution<double>(0.0, 1.0)(rng); }

// Derive an independent stream (e.g. per chain or per restart).
inline Rng derive_rng(std::uint64_t seed, std::uint64_t stream) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32)};
  return Rng(seq);
}

}  // namespace geolatnet
