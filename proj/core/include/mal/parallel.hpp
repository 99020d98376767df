#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>

namespace mal {

// Counter-based seed derivation (splitmix64 finalizer over master, stream and
// index). Distinct (stream, index) pairs give unrelated engine seeds.
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream, std::uint64_t index);

// Worker count from MAL_THREADS, else the hardware concurrency; always >= 1.
unsigned worker_count();

// Runs body(i) for i in [0, count) on up to `workers` threads (0 means
// worker_count()). Each index runs exactly once; the first exception thrown is
// rethrown after every worker stops.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body, unsigned workers = 0);

}  // namespace mal
