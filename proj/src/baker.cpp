#include "obsequiv/baker.hpp"

#include <array>
#include <cmath>
#include <stdexcept>

namespace obsequiv {

namespace {

constexpr std::array<std::uint8_t, 256> make_reverse_table() {
  std::array<std::uint8_t, 256> t{};
  for (unsigned i = 0; i < 256; ++i) {
    unsigned r = 0;
    for (unsigned b = 0; b < 8; ++b)
      if (i & (1u << b))
        r |= 1u << (7 - b);
    t[i] = static_cast<std::uint8_t>(r);
  }
  return t;
}

constexpr auto kReverse = make_reverse_table();

std::uint64_t reverse_bits(std::uint64_t v) {
  std::uint64_t r = 0;
  for (int i = 0; i < 8; ++i) {
    r = (r << 8) | kReverse[v & 0xff];
    v >>= 8;
  }
  return r;
}

std::int64_t floor_div64(std::int64_t i) { return i >= 0 ? i / 64 : -((-i + 63) / 64); }

// Word w holds sequence indices [64w, 64w + 64), smallest index most significant.
std::uint64_t word(const BakerState &s, std::int64_t w) {
  if (w == 0)
    return s.x_head;
  if (w == -1)
    return reverse_bits(s.y_head);
  if (s.tail_seed == 0)
    return 0;
  return mix64(s.tail_seed ^ mix64(static_cast<std::uint64_t>(w)));
}

double head_to_unit(std::uint64_t digits) { return static_cast<double>(digits >> 11) * 0x1.0p-53; }

std::uint64_t unit_to_head(double v) {
  if (!(v >= 0.0 && v < 1.0))
    throw std::invalid_argument("baker: coordinate outside [0,1)");
  return static_cast<std::uint64_t>(std::ldexp(v, 64));
}

} // namespace

Eigen::Vector2d baker_map(const Eigen::Vector2d &p) {
  const double twice = 2.0 * p.x();
  const double bit = std::floor(twice);
  return {twice - bit, (p.y() + bit) / 2.0};
}

Eigen::Vector2d baker_inverse(const Eigen::Vector2d &p) {
  const double twice = 2.0 * p.y();
  const double bit = std::floor(twice);
  return {(p.x() + bit) / 2.0, twice - bit};
}

BakerState BakerState::from_coordinates(double x, double y) {
  BakerState s;
  s.x_head = unit_to_head(x);
  s.y_head = unit_to_head(y);
  return s;
}

std::uint64_t BakerState::digits(std::int64_t index) const {
  const std::int64_t w = floor_div64(index);
  const auto offset = static_cast<unsigned>(index - 64 * w);
  const std::uint64_t first = word(*this, w);
  if (offset == 0)
    return first;
  return (first << offset) | (word(*this, w + 1) >> (64 - offset));
}

double BakerState::x() const { return head_to_unit(digits(shift)); }

double BakerState::y() const { return head_to_unit(reverse_bits(digits(shift - 64))); }

PhaseSpacePtr unit_square_space() {
  static const PhaseSpacePtr space =
      lebesgue_space("unit-square", Box(make_point({0.0, 0.0}), make_point({1.0, 1.0})));
  return space;
}

DiscreteSystem<BakerState> baker_system() {
  return DiscreteSystem<BakerState>(
      unit_square_space(),
      [](const BakerState &s) {
        BakerState n = s;
        ++n.shift;
        return n;
      },
      [](const BakerState &s) {
        BakerState n = s;
        --n.shift;
        return n;
      },
      [](Rng &rng) {
        BakerState s;
        s.x_head = rng();
        s.y_head = rng();
        s.tail_seed = rng() | 1u;
        return s;
      },
      [](const BakerState &a, const BakerState &b) {
        return (a.coordinates() - b.coordinates()).norm();
      },
      [](const BakerState &s) { return make_point({s.x(), s.y()}); });
}

Partition dyadic_square_partition(int bits) {
  if (bits < 0 || bits > 15)
    throw std::invalid_argument("dyadic_square_partition: bits must be in [0,15]");
  const int side = 1 << bits;
  return grid_partition(unit_square_space(), {side, side});
}

std::uint32_t dyadic_cell(const BakerState &s, int bits) {
  if (bits <= 0)
    return 0;
  const std::uint64_t ix = s.digits(s.shift) >> (64 - bits);
  const std::uint64_t iy = reverse_bits(s.digits(s.shift - 64)) >> (64 - bits);
  return static_cast<std::uint32_t>((ix << bits) | iy);
}

Eigen::Vector2d dyadic_cell_center(std::uint32_t cell, int bits) {
  const std::uint32_t side = 1u << bits;
  const double ix = static_cast<double>(cell / side);
  const double iy = static_cast<double>(cell % side);
  return {(ix + 0.5) / side, (iy + 0.5) / side};
}

} // namespace obsequiv
