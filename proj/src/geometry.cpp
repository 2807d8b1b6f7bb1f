#include "obsequiv/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace obsequiv {

Point make_point(std::initializer_list<double> coords) {
  Point p(static_cast<Eigen::Index>(coords.size()));
  Eigen::Index i = 0;
  for (double c : coords)
    p[i++] = c;
  return p;
}

Box::Box(Point lower, Point upper) : lo(std::move(lower)), hi(std::move(upper)) {
  if (lo.size() != hi.size())
    throw std::invalid_argument("Box: corner dimensions differ");
}

bool Box::contains(const Point &p) const {
  if (p.size() != lo.size())
    return false;
  return (p.array() >= lo.array()).all() && (p.array() < hi.array()).all();
}

bool Box::empty() const { return lo.size() == 0 || (hi.array() <= lo.array()).any(); }

double Box::volume() const {
  if (empty())
    return 0.0;
  return (hi - lo).prod();
}

Box intersect(const Box &a, const Box &b) {
  if (a.dim() != b.dim())
    throw std::invalid_argument("intersect: box dimensions differ");
  return Box(a.lo.cwiseMax(b.lo), a.hi.cwiseMin(b.hi));
}

bool contains(const Region &region, const Point &p) {
  return std::any_of(region.begin(), region.end(),
                     [&](const Box &b) { return b.contains(p); });
}

Region intersect(const Region &a, const Region &b) {
  Region out;
  for (const Box &x : a)
    for (const Box &y : b) {
      Box z = intersect(x, y);
      if (!z.empty())
        out.push_back(std::move(z));
    }
  return out;
}

PhaseSpace::PhaseSpace(std::string name, Box bounds, BoxMeasure measure)
    : name_(std::move(name)), bounds_(std::move(bounds)), measure_(std::move(measure)) {}

double PhaseSpace::measure(const Box &box) const {
  const Box clipped = intersect(box, bounds_);
  if (clipped.empty())
    return 0.0;
  return measure_(clipped);
}

double PhaseSpace::measure(const Region &region) const {
  double total = 0.0;
  for (const Box &b : region)
    total += measure(b);
  return total;
}

PhaseSpacePtr lebesgue_space(std::string name, Box bounds) {
  const double total = bounds.volume();
  if (!(total > 0.0))
    throw std::invalid_argument("lebesgue_space: bounds have zero volume");
  return std::make_shared<PhaseSpace>(std::move(name), std::move(bounds),
                                      [total](const Box &b) { return b.volume() / total; });
}

PhaseSpacePtr atomic_space(std::string name, std::vector<double> weights) {
  const double total = std::accumulate(weights.begin(), weights.end(), 0.0);
  if (weights.empty() || !(total > 0.0))
    throw std::invalid_argument("atomic_space: no positive mass");
  Box bounds(make_point({0.0}), make_point({static_cast<double>(weights.size())}));
  auto measure = [w = std::move(weights), total](const Box &b) {
    // Atoms sit at integer coordinates; b is already clipped to the bounds.
    const auto first = static_cast<std::size_t>(std::ceil(b.lo[0]));
    double mass = 0.0;
    for (std::size_t i = first; i < w.size() && static_cast<double>(i) < b.hi[0]; ++i)
      mass += w[i];
    return mass / total;
  };
  return std::make_shared<PhaseSpace>(std::move(name), std::move(bounds), std::move(measure));
}

namespace {

// Antiderivative of sqrt(r^2 - x^2).
double half_chord_integral(double x, double r) {
  const double s = std::sqrt(std::max(0.0, r * r - x * x));
  return 0.5 * (x * s + r * r * std::asin(std::clamp(x / r, -1.0, 1.0)));
}

} // namespace

double disc_rectangle_area(double cx, double cy, double radius, double x0, double x1,
                           double y0, double y1) {
  const double a0 = std::max(x0 - cx, -radius);
  const double a1 = std::min(x1 - cx, radius);
  const double b0 = y0 - cy;
  const double b1 = y1 - cy;
  if (a1 <= a0 || b1 <= b0)
    return 0.0;

  std::vector<double> cuts{a0, a1};
  for (double b : {b0, b1}) {
    if (std::abs(b) < radius) {
      const double x = std::sqrt(radius * radius - b * b);
      for (double c : {-x, x})
        if (c > a0 && c < a1)
          cuts.push_back(c);
    }
  }
  std::sort(cuts.begin(), cuts.end());

  double area = 0.0;
  for (std::size_t k = 0; k + 1 < cuts.size(); ++k) {
    const double lo = cuts[k];
    const double hi = cuts[k + 1];
    if (hi <= lo)
      continue;
    const double mid = 0.5 * (lo + hi);
    const double s = std::sqrt(std::max(0.0, radius * radius - mid * mid));
    const bool upper_is_arc = s < b1;
    const bool lower_is_arc = -s > b0;
    const double upper = upper_is_arc ? s : b1;
    const double lower = lower_is_arc ? -s : b0;
    if (upper <= lower)
      continue;
    const double arc = half_chord_integral(hi, radius) - half_chord_integral(lo, radius);
    const double width = hi - lo;
    const double top = upper_is_arc ? arc : b1 * width;
    const double bottom = lower_is_arc ? -arc : b0 * width;
    area += top - bottom;
  }
  return area;
}

} // namespace obsequiv
