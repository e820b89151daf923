#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <random>

namespace chisq {

// SplitMix64 finalizer; used to derive independent stream seeds.
std::uint64_t splitmix64(std::uint64_t x) noexcept;

// Seed for stream `stream` under `master`. Stable across platforms and runs.
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream) noexcept;
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t a, std::uint64_t b) noexcept;

using Rng = std::mt19937_64;

// Portable draws. The standard distributions are implementation-defined, so
// these are used wherever bit-reproducibility matters.
double uniform01(Rng& rng) noexcept;          // in (0, 1)
double standard_normal(Rng& rng) noexcept;    // Box-Muller, no cached spare

// Number of workers to use; 0 means hardware concurrency.
unsigned resolve_threads(unsigned requested) noexcept;

// Runs fn(i) for i in [0, n) on up to `threads` workers. Work items are
// claimed dynamically, so fn must write only to slot i of its output. If any
// item throws, the exception of the lowest index is rethrown.
void parallel_for(std::size_t n, unsigned threads, const std::function<void(std::size_t)>& fn);

}  // namespace chisq
