#ifndef OBSEQUIV_TRAJECTORY_HPP
#define OBSEQUIV_TRAJECTORY_HPP

#include "obsequiv/fdd.hpp"
#include "obsequiv/partition.hpp"
#include "obsequiv/system.hpp"

#include <algorithm>
#include <span>
#include <stdexcept>
#include <vector>

namespace obsequiv {

/// Times start + i*step for i = 0, 1, ... while not past stop (stop itself is
/// included up to rounding).
std::vector<double> time_grid(double start, double stop, double step);

inline void require_sorted_grid(std::span<const double> grid) {
  if (grid.empty())
    throw std::invalid_argument("trajectory: empty time grid");
  if (!std::is_sorted(grid.begin(), grid.end()))
    throw std::invalid_argument("trajectory: time grid must be ascending");
}

/// (Phi(T_t(m)))_{t in grid} for a given initial state m.
template <System S>
SymbolPath observe_orbit(const S &system, const ObservationFunction &obs,
                         const typename S::state_type &initial, std::span<const double> grid) {
  require_sorted_grid(grid);
  SymbolPath path;
  path.times.assign(grid.begin(), grid.end());
  path.symbols.reserve(grid.size());
  auto state = system.evolve(initial, grid.front());
  double now = grid.front();
  for (double t : grid) {
    if (t != now) {
      state = system.evolve(state, t - now);
      now = t;
    }
    path.symbols.push_back(obs(system.coordinates(state)));
  }
  return path;
}

/// Samples m from the invariant measure with `seed` and observes its orbit.
template <System S>
SymbolPath trajectory_symbols(const S &system, const ObservationFunction &obs,
                              std::span<const double> grid, std::uint64_t seed) {
  require_sorted_grid(grid);
  Rng rng(seed);
  return observe_orbit(system, obs, system.sample(rng), grid);
}

} // namespace obsequiv

#endif // OBSEQUIV_TRAJECTORY_HPP
