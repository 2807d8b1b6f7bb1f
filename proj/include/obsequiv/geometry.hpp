#ifndef OBSEQUIV_GEOMETRY_HPP
#define OBSEQUIV_GEOMETRY_HPP

#include <Eigen/Core>

#include <functional>
#include <memory>
#include <string>
#include <vector>

namespace obsequiv {

/// Coordinates of a phase-space point. At most four coordinates, stored inline.
using Point = Eigen::Matrix<double, Eigen::Dynamic, 1, Eigen::ColMajor, 4, 1>;

Point make_point(std::initializer_list<double> coords);

/// Half-open axis-aligned box [lo, hi) in coordinate space.
struct Box {
  Point lo;
  Point hi;

  Box() = default;
  Box(Point lower, Point upper);

  Eigen::Index dim() const { return lo.size(); }
  bool contains(const Point &p) const;
  bool empty() const;
  /// Lebesgue volume in coordinates (not the phase-space measure).
  double volume() const;
};

/// Intersection, possibly empty (then `empty()` holds).
Box intersect(const Box &a, const Box &b);

/// Finite union of pairwise disjoint boxes.
using Region = std::vector<Box>;

bool contains(const Region &region, const Point &p);
Region intersect(const Region &a, const Region &b);

/// A named phase space: coordinate bounds plus the normalized invariant
/// measure of boxes. Cells of partitions are regions over this space.
class PhaseSpace {
public:
  using BoxMeasure = std::function<double(const Box &)>;

  PhaseSpace(std::string name, Box bounds, BoxMeasure measure);

  const std::string &name() const { return name_; }
  const Box &bounds() const { return bounds_; }
  Eigen::Index dim() const { return bounds_.dim(); }

  double measure(const Box &box) const;
  double measure(const Region &region) const;

private:
  std::string name_;
  Box bounds_;
  BoxMeasure measure_;
};

using PhaseSpacePtr = std::shared_ptr<const PhaseSpace>;

/// Lebesgue measure on a unit box [0,1)^d (or other bounds) normalized to 1.
PhaseSpacePtr lebesgue_space(std::string name, Box bounds);

/// Atoms 0..weights.size()-1 on the first coordinate with the given masses.
/// Used for symbolic spaces where a point's coordinate is a state index.
PhaseSpacePtr atomic_space(std::string name, std::vector<double> weights);

/// Area of the disc (center, radius) intersected with an axis-aligned
/// rectangle [x0,x1) x [y0,y1). Closed form.
double disc_rectangle_area(double cx, double cy, double radius, double x0, double x1,
                           double y0, double y1);

} // namespace obsequiv

#endif // OBSEQUIV_GEOMETRY_HPP
