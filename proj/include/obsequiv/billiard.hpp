#ifndef OBSEQUIV_BILLIARD_HPP
#define OBSEQUIV_BILLIARD_HPP

#include "obsequiv/system.hpp"

#include <Eigen/Core>

#include <cstddef>
#include <vector>

namespace obsequiv {

struct Obstacle {
  Eigen::Vector2d center;
  double radius = 0.0;
};

/// Point particle on the table: position (m), direction (rad, [0, 2pi)),
/// speed (m/s).
struct BilliardState {
  Eigen::Vector2d position = Eigen::Vector2d::Zero();
  double direction = 0.0;
  double speed = 1.0;
};

/// Rectangular table [0,w) x [0,h) with disjoint circular obstacles strictly
/// inside it. Motion is free flight with specular reflection, integrated
/// event by event.
class BilliardTable {
public:
  static constexpr std::size_t kMaxEvents = 10'000'000;
  /// Discriminants below this count as grazing, i.e. no hit.
  static constexpr double kGrazing = 1e-12;

  enum class Wall { none, left, right, bottom, top };

  struct Collision {
    double time = 0.0; ///< seconds until the hit
    Eigen::Vector2d normal = Eigen::Vector2d::Zero(); ///< unit, pointing into the free region
    BilliardState incoming;  ///< state at the hit, before reflection
    BilliardState outgoing;  ///< state at the hit, after reflection
    Wall wall = Wall::none;
    int obstacle = -1;       ///< index of the obstacle hit, or -1
  };

  BilliardTable(double width, double height, std::vector<Obstacle> obstacles, double speed);

  double width() const { return width_; }
  double height() const { return height_; }
  double speed() const { return speed_; }
  const std::vector<Obstacle> &obstacles() const { return obstacles_; }

  Collision next_collision(const BilliardState &s) const;
  /// State after t seconds (negative t runs the motion backwards).
  BilliardState evolve(const BilliardState &s, double t) const;
  /// Uniform position on the free region and uniform direction.
  BilliardState sample(Rng &rng) const;
  /// Euclidean position distance combined with angular distance scaled so
  /// that opposite directions are one table diagonal apart.
  double distance(const BilliardState &a, const BilliardState &b) const;
  bool in_free_region(const Eigen::Vector2d &q) const;

  /// Area of the free region inside the axis-aligned rectangle.
  double free_area(double x0, double x1, double y0, double y1) const;
  /// Phase space (x, y, direction) with the normalized Liouville measure.
  PhaseSpacePtr phase_space() const;

private:
  BilliardState advance(const BilliardState &s, double t) const;

  double width_;
  double height_;
  std::vector<Obstacle> obstacles_;
  double speed_;
  PhaseSpacePtr space_;
};

FlowSystem<BilliardState> billiard_system(const BilliardTable &table);
FlowSystem<BilliardState> billiard_system(double width, double height,
                                          std::vector<Obstacle> obstacles, double speed);

Point billiard_coordinates(const BilliardState &s);
double wrap_angle(double theta);

} // namespace obsequiv

#endif // OBSEQUIV_BILLIARD_HPP
