#pragma once

#include <cstddef>
#include <functional>

namespace geolatnet {

// Worker count: hardware concurrency, capped by GEOLATNET_THREADS when set.
std::size_t thread_budget();

// Runs fn(k) for k in [0, n) on up to thread_budget() threads. Work items must
// not share mutable state; the first exception thrown is rethrown here.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn);

}  // namespace geolatnet
