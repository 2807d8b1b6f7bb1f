#include "obsequiv/rotation.hpp"

#include <cmath>

namespace obsequiv {

double rotate(double m, double shift) {
  const double frac = shift - std::floor(shift);
  double out = m + frac;
  if (out >= 1.0)
    out -= 1.0;
  return out >= 1.0 || out < 0.0 ? out - std::floor(out) : out;
}

double circle_distance(double a, double b) {
  const double d = std::abs(a - b);
  const double w = d - std::floor(d);
  return std::min(w, 1.0 - w);
}

FlowSystem<double> rotation_system(double alpha) {
  if (alpha == 0.0 || !std::isfinite(alpha))
    throw std::invalid_argument("rotation: alpha must be finite and nonzero");
  auto space = lebesgue_space("circle", Box(make_point({0.0}), make_point({1.0})));
  return FlowSystem<double>(
      std::move(space), [alpha](const double &m, double t) { return rotate(m, alpha * t); },
      [](Rng &rng) { return uniform01(rng); }, circle_distance,
      [](const double &m) { return make_point({m}); });
}

} // namespace obsequiv
