#include "obsequiv/billiard.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace obsequiv {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

Eigen::Vector2d heading(double theta) { return {std::cos(theta), std::sin(theta)}; }

double free_area_of(double width, double height, const std::vector<Obstacle> &obstacles,
                    double x0, double x1, double y0, double y1) {
  x0 = std::max(x0, 0.0);
  y0 = std::max(y0, 0.0);
  x1 = std::min(x1, width);
  y1 = std::min(y1, height);
  if (x1 <= x0 || y1 <= y0)
    return 0.0;
  double area = (x1 - x0) * (y1 - y0);
  for (const Obstacle &o : obstacles)
    area -= disc_rectangle_area(o.center.x(), o.center.y(), o.radius, x0, x1, y0, y1);
  return std::max(area, 0.0);
}

} // namespace

double wrap_angle(double theta) {
  double w = std::fmod(theta, kTwoPi);
  if (w < 0.0)
    w += kTwoPi;
  return w >= kTwoPi ? 0.0 : w;
}

BilliardTable::BilliardTable(double width, double height, std::vector<Obstacle> obstacles,
                             double speed)
    : width_(width), height_(height), obstacles_(std::move(obstacles)), speed_(speed) {
  if (!(width_ > 0.0) || !(height_ > 0.0))
    throw std::invalid_argument("billiard: table dimensions must be positive");
  if (!(speed_ > 0.0))
    throw std::invalid_argument("billiard: speed must be positive");
  for (std::size_t i = 0; i < obstacles_.size(); ++i) {
    const Obstacle &o = obstacles_[i];
    if (!(o.radius > 0.0))
      throw std::invalid_argument("billiard: obstacle " + std::to_string(i) +
                                  " has nonpositive radius");
    if (o.center.x() - o.radius <= 0.0 || o.center.x() + o.radius >= width_ ||
        o.center.y() - o.radius <= 0.0 || o.center.y() + o.radius >= height_)
      throw std::invalid_argument("billiard: obstacle " + std::to_string(i) +
                                  " is not strictly inside the table");
    for (std::size_t j = 0; j < i; ++j)
      if ((o.center - obstacles_[j].center).norm() <= o.radius + obstacles_[j].radius)
        throw std::invalid_argument("billiard: obstacles " + std::to_string(j) + " and " +
                                    std::to_string(i) + " overlap");
  }
  const double total = free_area_of(width_, height_, obstacles_, 0.0, width_, 0.0, height_);
  auto measure = [w = width_, h = height_, obs = obstacles_, total](const Box &b) {
    const double sector = (b.hi[2] - b.lo[2]) / kTwoPi;
    return free_area_of(w, h, obs, b.lo[0], b.hi[0], b.lo[1], b.hi[1]) * sector / total;
  };
  space_ = std::make_shared<PhaseSpace>(
      "billiard", Box(make_point({0.0, 0.0, 0.0}), make_point({width_, height_, kTwoPi})),
      std::move(measure));
}

bool BilliardTable::in_free_region(const Eigen::Vector2d &q) const {
  if (q.x() < 0.0 || q.x() > width_ || q.y() < 0.0 || q.y() > height_)
    return false;
  for (const Obstacle &o : obstacles_)
    if ((q - o.center).squaredNorm() < o.radius * o.radius)
      return false;
  return true;
}

double BilliardTable::free_area(double x0, double x1, double y0, double y1) const {
  return free_area_of(width_, height_, obstacles_, x0, x1, y0, y1);
}

PhaseSpacePtr BilliardTable::phase_space() const { return space_; }

BilliardTable::Collision BilliardTable::next_collision(const BilliardState &s) const {
  const Eigen::Vector2d d = heading(s.direction);
  const Eigen::Vector2d &q = s.position;
  Collision c;
  double best = std::numeric_limits<double>::infinity(); // path length

  // Walls are candidates only when approached, so a particle sitting on a
  // wall after reflecting from it cannot hit it again.
  if (d.x() > 0.0 && (width_ - q.x()) / d.x() < best) {
    best = std::max(0.0, (width_ - q.x()) / d.x());
    c.wall = Wall::right;
  }
  if (d.x() < 0.0 && -q.x() / d.x() < best) {
    best = std::max(0.0, -q.x() / d.x());
    c.wall = Wall::left;
  }
  if (d.y() > 0.0 && (height_ - q.y()) / d.y() < best) {
    best = std::max(0.0, (height_ - q.y()) / d.y());
    c.wall = Wall::top;
  }
  if (d.y() < 0.0 && -q.y() / d.y() < best) {
    best = std::max(0.0, -q.y() / d.y());
    c.wall = Wall::bottom;
  }
  for (std::size_t i = 0; i < obstacles_.size(); ++i) {
    const Eigen::Vector2d p = q - obstacles_[i].center;
    const double b = p.dot(d);
    if (b >= 0.0)
      continue; // moving away
    const double disc = b * b - (p.squaredNorm() - obstacles_[i].radius * obstacles_[i].radius);
    if (disc < kGrazing)
      continue;
    const double hit = std::max(0.0, -b - std::sqrt(disc));
    if (hit < best) {
      best = hit;
      c.wall = Wall::none;
      c.obstacle = static_cast<int>(i);
    }
  }
  if (!std::isfinite(best))
    throw std::logic_error("billiard: no collision ahead");
  if (c.wall != Wall::none)
    c.obstacle = -1;

  c.time = best / s.speed;
  c.incoming = s;
  c.incoming.position = q + best * d;
  c.outgoing = c.incoming;
  switch (c.wall) {
  case Wall::left:
  case Wall::right:
    c.incoming.position.x() = c.wall == Wall::left ? 0.0 : width_;
    c.normal = {c.wall == Wall::left ? 1.0 : -1.0, 0.0};
    c.outgoing.position = c.incoming.position;
    c.outgoing.direction = wrap_angle(std::numbers::pi - s.direction);
    break;
  case Wall::bottom:
  case Wall::top:
    c.incoming.position.y() = c.wall == Wall::bottom ? 0.0 : height_;
    c.normal = {0.0, c.wall == Wall::bottom ? 1.0 : -1.0};
    c.outgoing.position = c.incoming.position;
    c.outgoing.direction = wrap_angle(-s.direction);
    break;
  case Wall::none: {
    const Obstacle &o = obstacles_[static_cast<std::size_t>(c.obstacle)];
    c.normal = (c.incoming.position - o.center).normalized();
    const Eigen::Vector2d out = d - 2.0 * d.dot(c.normal) * c.normal;
    c.outgoing.direction = wrap_angle(std::atan2(out.y(), out.x()));
    break;
  }
  }
  return c;
}

BilliardState BilliardTable::advance(const BilliardState &start, double t) const {
  BilliardState s = start;
  double remaining = t;
  for (std::size_t events = 0;; ++events) {
    if (events > kMaxEvents)
      throw std::runtime_error("billiard: more than 10^7 collisions in one evolve call");
    const Collision c = next_collision(s);
    if (c.time > remaining) {
      s.position += remaining * s.speed * heading(s.direction);
      return s;
    }
    remaining -= c.time;
    s = c.outgoing;
  }
}

BilliardState BilliardTable::evolve(const BilliardState &s, double t) const {
  if (t >= 0.0)
    return advance(s, t);
  // Time reversal: flip the direction, run forward, flip back.
  BilliardState r = s;
  r.direction = wrap_angle(s.direction + std::numbers::pi);
  r = advance(r, -t);
  r.direction = wrap_angle(r.direction + std::numbers::pi);
  return r;
}

BilliardState BilliardTable::sample(Rng &rng) const {
  BilliardState s;
  s.speed = speed_;
  do {
    s.position = {uniform(rng, 0.0, width_), uniform(rng, 0.0, height_)};
  } while (!in_free_region(s.position));
  s.direction = uniform(rng, 0.0, kTwoPi);
  return s;
}

double BilliardTable::distance(const BilliardState &a, const BilliardState &b) const {
  const double diagonal = std::hypot(width_, height_);
  const double raw = wrap_angle(a.direction - b.direction);
  const double angular = std::min(raw, kTwoPi - raw);
  return std::hypot((a.position - b.position).norm(), diagonal * angular / std::numbers::pi);
}

Point billiard_coordinates(const BilliardState &s) {
  return make_point({s.position.x(), s.position.y(), s.direction});
}

FlowSystem<BilliardState> billiard_system(const BilliardTable &table) {
  return FlowSystem<BilliardState>(
      table.phase_space(),
      [table](const BilliardState &s, double t) { return table.evolve(s, t); },
      [table](Rng &rng) { return table.sample(rng); },
      [table](const BilliardState &a, const BilliardState &b) { return table.distance(a, b); },
      billiard_coordinates);
}

FlowSystem<BilliardState> billiard_system(double width, double height,
                                          std::vector<Obstacle> obstacles, double speed) {
  return billiard_system(BilliardTable(width, height, std::move(obstacles), speed));
}

} // namespace obsequiv
