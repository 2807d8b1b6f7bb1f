#ifndef OBSEQUIV_BAKER_HPP
#define OBSEQUIV_BAKER_HPP

#include "obsequiv/partition.hpp"
#include "obsequiv/system.hpp"

#include <Eigen/Core>

#include <cstdint>

namespace obsequiv {

/// Baker's map B(x,y) = (2x mod 1, (y + floor(2x))/2) on plain doubles.
/// Each application discards one binary digit of x, so long orbits need
/// BakerState instead.
Eigen::Vector2d baker_map(const Eigen::Vector2d &p);
Eigen::Vector2d baker_inverse(const Eigen::Vector2d &p);

/// Point of the unit square held as its bi-infinite binary digit sequence
/// ... y2 y1 . x1 x2 ... . The baker map shifts the decimal point, so orbits
/// stay exact for any number of steps. Digits beyond the 64-digit heads are
/// generated from `tail_seed` (all zero when the seed is 0).
struct BakerState {
  std::uint64_t x_head = 0; ///< first 64 digits of x at shift 0, most significant first
  std::uint64_t y_head = 0; ///< first 64 digits of y at shift 0, most significant first
  std::uint64_t tail_seed = 0;
  std::int64_t shift = 0;

  static BakerState from_coordinates(double x, double y);

  /// Current coordinates, truncated to 53 digits.
  double x() const;
  double y() const;
  Eigen::Vector2d coordinates() const { return {x(), y()}; }

  /// 64 digits starting at sequence index `index` (index 0 = first digit of
  /// x at shift 0, index -1 = first digit of y at shift 0).
  std::uint64_t digits(std::int64_t index) const;
};

/// Baker's map on the unit square with Lebesgue measure and Euclidean metric.
DiscreteSystem<BakerState> baker_system();

/// 2^bits x 2^bits dyadic squares on the unit square, row-major in x.
Partition dyadic_square_partition(int bits);

/// Index ix * 2^bits + iy of the dyadic square containing the state,
/// read directly from its digits.
std::uint32_t dyadic_cell(const BakerState &s, int bits);
Eigen::Vector2d dyadic_cell_center(std::uint32_t cell, int bits);

PhaseSpacePtr unit_square_space();

} // namespace obsequiv

#endif // OBSEQUIV_BAKER_HPP
