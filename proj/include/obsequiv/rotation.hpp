#ifndef OBSEQUIV_ROTATION_HPP
#define OBSEQUIV_ROTATION_HPP

#include "obsequiv/system.hpp"

namespace obsequiv {

/// Rotation flow on the circle [0,1): T_t(m) = (m + alpha t) mod 1, Lebesgue
/// measure, wraparound metric. Throws for alpha == 0.
FlowSystem<double> rotation_system(double alpha);

/// Translation (m + shift) mod 1, reducing `shift` first so that integer
/// shifts return m unchanged.
double rotate(double m, double shift);

/// Wraparound distance on [0,1).
double circle_distance(double a, double b);

} // namespace obsequiv

#endif // OBSEQUIV_ROTATION_HPP
