#include "obsequiv/trajectory.hpp"

#include <cmath>

namespace obsequiv {

std::vector<double> time_grid(double start, double stop, double step) {
  if (!(step > 0.0) || !std::isfinite(start) || !std::isfinite(stop) || stop < start)
    throw std::invalid_argument("time_grid: need start <= stop and step > 0");
  const auto n = static_cast<std::size_t>(std::floor((stop - start) / step + 1e-9));
  std::vector<double> grid;
  grid.reserve(n + 1);
  for (std::size_t i = 0; i <= n; ++i)
    grid.push_back(start + static_cast<double>(i) * step);
  return grid;
}

} // namespace obsequiv
