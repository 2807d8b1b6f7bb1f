#ifndef OBSEQUIV_RANDOM_HPP
#define OBSEQUIV_RANDOM_HPP

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <random>
#include <thread>
#include <vector>

namespace obsequiv {

using Rng = std::mt19937_64;

/// SplitMix64 finalizer. Used as the fixed mixing function for seed derivation.
std::uint64_t mix64(std::uint64_t x) noexcept;

/// Seed of trajectory `index` in ensemble stream `stream` under `master`.
/// Depends only on its arguments, so ensembles are reproducible regardless of
/// how they are split across threads.
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream,
                          std::uint64_t index) noexcept;

/// Uniform double in [0,1) built from the top 53 bits of one draw.
inline double uniform01(Rng &rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

/// Uniform double in [lo,hi).
inline double uniform(Rng &rng, double lo, double hi) { return lo + (hi - lo) * uniform01(rng); }

/// Index drawn from a cumulative distribution (last entry is the total mass).
std::size_t draw_index(Rng &rng, const std::vector<double> &cumulative);

/// Sample count, master seed and worker count for an ensemble computation.
struct Ensemble {
  std::size_t samples = 10000;
  std::uint64_t seed = 0;
  unsigned jobs = 1;
};

/// Runs body(i) for i in [0,n) on up to `jobs` threads in contiguous blocks.
/// Callers write into preallocated slots, which keeps results independent of
/// the thread count.
template <class Body> void parallel_for(std::size_t n, unsigned jobs, Body &&body) {
  if (jobs <= 1 || n < 2 * static_cast<std::size_t>(jobs)) {
    for (std::size_t i = 0; i < n; ++i)
      body(i);
    return;
  }
  std::vector<std::jthread> workers;
  workers.reserve(jobs);
  const std::size_t chunk = (n + jobs - 1) / jobs;
  for (unsigned w = 0; w < jobs; ++w) {
    const std::size_t begin = w * chunk;
    const std::size_t end = std::min(n, begin + chunk);
    if (begin >= end)
      break;
    workers.emplace_back([begin, end, &body] {
      for (std::size_t i = begin; i < end; ++i)
        body(i);
    });
  }
}

} // namespace obsequiv

#endif // OBSEQUIV_RANDOM_HPP
