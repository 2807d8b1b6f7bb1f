#include "obsequiv/baker.hpp"
#include "obsequiv/billiard.hpp"
#include "obsequiv/equivalence.hpp"
#include "obsequiv/rotation.hpp"
#include "obsequiv/suspension.hpp"
#include "obsequiv/trajectory.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>

using namespace obsequiv;

namespace {

BilliardTable scatterer() {
  return BilliardTable(1.0, 1.0, {Obstacle{Eigen::Vector2d(0.5, 0.5), 0.2}}, 1.0);
}

FlowSystem<SuspensionState<BakerState>> baker_tower() {
  const auto baker = baker_system();
  const auto halves = observation_from_partition(grid_partition(baker.space(), {2, 1}), {"b1", "b2"});
  return build_flow_under_function(baker, halves, RoofFunction{{1.0, std::sqrt(2.0)}});
}

} // namespace

TEST_CASE("rotation reduces shifts and measures wraparound distance") {
  CHECK(rotate(0.3, 5.0) == 0.3);
  CHECK(rotate(0.9, 0.2) == doctest::Approx(0.1));
  CHECK(rotate(0.1, -0.2) == doctest::Approx(0.9));
  CHECK(circle_distance(0.05, 0.95) == doctest::Approx(0.1));
  CHECK_THROWS_AS(rotation_system(0.0), std::invalid_argument);
}

TEST_CASE("rotation evolves linearly and is reversible") {
  const auto rot = rotation_system(std::sqrt(2.0));
  const double m = 0.123;
  CHECK(rot.evolve(m, 1.0) == doctest::Approx(std::fmod(m + std::sqrt(2.0), 1.0)));
  CHECK(rot.distance(rot.evolve(rot.evolve(m, 3.7), -3.7), m) < 1e-12);
}

TEST_CASE("rotation and billiard preserve their invariant measures") {
  const auto rot = rotation_system(std::sqrt(2.0));
  const std::vector<MeasureTest> sets{{"[0,0.3)", {Box(make_point({0.0}), make_point({0.3}))}}};
  CHECK(check_measure_preservation(rot, sets, {0.4, 7.1}, Ensemble{20000, 1, 2}).passed());

  const auto table = scatterer();
  const auto bill = billiard_system(table);
  const std::vector<MeasureTest> strip{
      {"left strip", {Box(make_point({0.0, 0.0, 0.0}), make_point({0.3, 1.0, 2 * std::numbers::pi}))}},
      {"heading east", {Box(make_point({0.0, 0.0, 0.0}), make_point({1.0, 1.0, std::numbers::pi / 2}))}}};
  CHECK(check_measure_preservation(bill, strip, {0.5, 2.5}, Ensemble{20000, 2, 2}).passed());
}

TEST_CASE("a contracting map fails the measure-preservation check") {
  // x -> x^2 on [0,1): T^{-1}[0, 1/2) = [0, sqrt(1/2)).
  const auto space = lebesgue_space("interval", Box(make_point({0.0}), make_point({1.0})));
  const DiscreteSystem<double> squash(
      space, [](const double &x) { return x * x; }, [](const double &x) { return std::sqrt(x); },
      [](Rng &rng) { return uniform01(rng); }, [](const double &a, const double &b) { return std::abs(a - b); },
      [](const double &x) { return make_point({x}); });
  const std::vector<MeasureTest> sets{{"[0,1/2)", {Box(make_point({0.0}), make_point({0.5}))}}};
  const auto r = check_measure_preservation(squash, sets, {1.0}, Ensemble{20000, 3, 1});
  CHECK(r.verdict == Verdict::fail);
  CHECK(r.items[0].estimate == doctest::Approx(std::sqrt(0.5)).epsilon(0.02));
}

TEST_CASE("billiard construction rejects bad tables") {
  CHECK_THROWS_AS(BilliardTable(0.0, 1.0, {}, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(BilliardTable(1.0, 1.0, {}, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(BilliardTable(1.0, 1.0, {Obstacle{Eigen::Vector2d(0.1, 0.5), 0.2}}, 1.0),
                  std::invalid_argument);
  CHECK_THROWS_AS(BilliardTable(1.0, 1.0,
                                {Obstacle{Eigen::Vector2d(0.4, 0.5), 0.15},
                                 Obstacle{Eigen::Vector2d(0.6, 0.5), 0.15}},
                                1.0),
                  std::invalid_argument);
}

TEST_CASE("billiard collisions from hand-computed geometry") {
  const auto table = scatterer();
  SUBCASE("wall hit") {
    const auto c = table.next_collision(BilliardState{Eigen::Vector2d(0.1, 0.1), 0.0, 1.0});
    CHECK(c.time == doctest::Approx(0.9));
    CHECK(c.wall == BilliardTable::Wall::right);
    CHECK(c.outgoing.direction == doctest::Approx(std::numbers::pi));
  }
  SUBCASE("head-on obstacle hit") {
    const auto c = table.next_collision(BilliardState{Eigen::Vector2d(0.1, 0.5), 0.0, 1.0});
    CHECK(c.time == doctest::Approx(0.2));
    CHECK(c.obstacle == 0);
    CHECK(c.normal.x() == doctest::Approx(-1.0));
    CHECK(c.outgoing.direction == doctest::Approx(std::numbers::pi));
  }
  SUBCASE("oblique obstacle hit reflects about the normal") {
    // Ray y = 0.6 heading east meets the circle at x = 0.5 - sqrt(0.04 - 0.01).
    const auto c = table.next_collision(BilliardState{Eigen::Vector2d(0.05, 0.6), 0.0, 1.0});
    const double hx = 0.5 - std::sqrt(0.03);
    CHECK(c.incoming.position.x() == doctest::Approx(hx));
    const Eigen::Vector2d n = (Eigen::Vector2d(hx, 0.6) - Eigen::Vector2d(0.5, 0.5)).normalized();
    const Eigen::Vector2d v(1.0, 0.0);
    const Eigen::Vector2d w = v - 2.0 * v.dot(n) * n;
    CHECK(std::cos(c.outgoing.direction) == doctest::Approx(w.x()));
    CHECK(std::sin(c.outgoing.direction) == doctest::Approx(w.y()));
  }
}

TEST_CASE("billiard free area and sampling") {
  const auto table = scatterer();
  CHECK(table.free_area(0, 1, 0, 1) == doctest::Approx(1.0 - std::numbers::pi * 0.04));
  CHECK(table.free_area(0, 0.5, 0, 0.5) == doctest::Approx(0.25 - std::numbers::pi * 0.01));
  Rng rng(5);
  for (int i = 0; i < 2000; ++i) {
    const auto s = table.sample(rng);
    REQUIRE(table.in_free_region(s.position));
    REQUIRE(s.direction >= 0.0);
    REQUIRE(s.direction < 2 * std::numbers::pi);
  }
}

TEST_CASE("billiard motion is time-reversible and stays on the table") {
  // Rounding errors grow exponentially in this chaotic flow, so reversal is
  // only checked over a few collisions.
  const auto table = scatterer();
  Rng rng(8);
  for (int i = 0; i < 200; ++i) {
    const auto s = table.sample(rng);
    const double t = uniform(rng, 0.1, 2.0);
    const auto f = table.evolve(s, t);
    REQUIRE(table.in_free_region(f.position));
    CHECK(table.distance(table.evolve(f, -t), s) < 1e-8);
  }
}

TEST_CASE("wrap_angle maps into [0, 2pi)") {
  CHECK(wrap_angle(-0.5) == doctest::Approx(2 * std::numbers::pi - 0.5));
  CHECK(wrap_angle(7.0) == doctest::Approx(7.0 - 2 * std::numbers::pi));
}

TEST_CASE("baker map on exact dyadic points") {
  const auto a = baker_map(Eigen::Vector2d(0.25, 0.5));
  CHECK(a.x() == 0.5);
  CHECK(a.y() == 0.25);
  const auto b = baker_map(Eigen::Vector2d(0.75, 0.5));
  CHECK(b.x() == 0.5);
  CHECK(b.y() == 0.75);
  const auto c = baker_inverse(b);
  CHECK(c.x() == 0.75);
  CHECK(c.y() == 0.5);
}

TEST_CASE("digit-sequence baker states stay exact over long orbits") {
  const auto baker = baker_system();
  Rng rng(13);
  for (int i = 0; i < 20; ++i) {
    const auto s = baker.sample(rng);
    const auto far = baker.evolve(s, 200.0);
    const auto back = baker.evolve(far, -200.0);
    CHECK(back.x() == s.x());
    CHECK(back.y() == s.y());
    // One step agrees with the floating-point map while digits suffice.
    const auto one = baker.step(s);
    const auto ref = baker_map(s.coordinates());
    CHECK(one.x() == doctest::Approx(ref.x()).epsilon(1e-12));
    CHECK(one.y() == doctest::Approx(ref.y()).epsilon(1e-12));
  }
  CHECK_THROWS_AS(baker.evolve(baker.sample(rng), 0.5), std::invalid_argument);
}

TEST_CASE("dyadic cells agree with the dyadic partition") {
  const auto s = BakerState::from_coordinates(0.3, 0.8);
  CHECK(dyadic_cell(s, 2) == 1u * 4u + 3u);
  const auto p = dyadic_square_partition(3);
  CHECK(p.size() == 64);
  Rng rng(21);
  const auto baker = baker_system();
  for (int i = 0; i < 1000; ++i) {
    const auto x = baker.sample(rng);
    REQUIRE(p.locate(baker.coordinates(x)) == dyadic_cell(x, 3));
  }
  const auto c = dyadic_cell_center(7, 2);
  CHECK(c.x() == doctest::Approx(0.375));
  CHECK(c.y() == doctest::Approx(0.875));
}

TEST_CASE("baker map preserves Lebesgue measure") {
  const auto baker = baker_system();
  const std::vector<MeasureTest> sets{
      {"bottom-left", {Box(make_point({0.0, 0.0}), make_point({0.3, 0.6}))}}};
  CHECK(check_measure_preservation(baker, sets, {1.0, 5.0, -3.0}, Ensemble{20000, 4, 2}).passed());
}

TEST_CASE("flow under a function: roof crossings and measure") {
  const auto baker = baker_system();
  const auto halves = observation_from_partition(grid_partition(baker.space(), {2, 1}), {"b1", "b2"});
  CHECK_THROWS_AS(build_flow_under_function(baker, halves, RoofFunction{{1.0}}), std::invalid_argument);
  CHECK_THROWS_AS(build_flow_under_function(baker, halves, RoofFunction{{1.0, -1.0}}),
                  std::invalid_argument);

  const auto tower = baker_tower();
  const auto k = BakerState::from_coordinates(0.25, 0.5); // roof 1
  const SuspensionState<BakerState> s{k, 0.0};
  const auto up = tower.evolve(s, 1.0);
  CHECK(up.height == doctest::Approx(0.0));
  CHECK(up.base.x() == doctest::Approx(0.5)); // base stepped once
  const auto down = tower.evolve(up, -0.25);
  CHECK(down.base.x() == doctest::Approx(0.25));
  CHECK(down.height == doctest::Approx(0.75));

  // Oracle for a low band: both halves contribute 0.5 * 0.5 of height mass,
  // normalised by the mean roof.
  const double band = (0.5 * 0.5 + 0.5 * 0.5) / (0.5 * 1.0 + 0.5 * std::sqrt(2.0));
  CHECK(tower.space()->measure(Box(make_point({0.0, 0.0, 0.0}), make_point({1.0, 1.0, 0.5}))) ==
        doctest::Approx(band));
  CHECK(tower.space()->measure(tower.space()->bounds()) == doctest::Approx(1.0));
  const std::vector<MeasureTest> sets{
      {"low band", {Box(make_point({0.0, 0.0, 0.0}), make_point({1.0, 1.0, 0.5}))}}};
  CHECK(check_measure_preservation(tower, sets, {0.3, 2.9}, Ensemble{20000, 6, 2}).passed());
}

TEST_CASE("semigroup law on the tower") {
  const auto tower = baker_tower();
  Rng rng(30);
  for (int i = 0; i < 200; ++i) {
    const auto k = tower.sample(rng);
    const double t1 = uniform(rng, -4, 4), t2 = uniform(rng, -4, 4);
    REQUIRE(tower.distance(tower.evolve(k, t1 + t2), tower.evolve(tower.evolve(k, t1), t2)) < 1e-9);
  }
}

TEST_CASE("time grids and trajectory observation") {
  const auto g = time_grid(0.0, 1.0, 0.25);
  REQUIRE(g.size() == 5);
  CHECK(g.back() == doctest::Approx(1.0));
  CHECK_THROWS_AS(require_sorted_grid(std::vector<double>{}), std::invalid_argument);
  CHECK_THROWS_AS(require_sorted_grid(std::vector<double>{1.0, 0.0}), std::invalid_argument);

  const auto rot = rotation_system(0.25);
  const auto halves = observation_from_partition(grid_partition(rot.space(), {2}));
  const std::vector<double> grid{0.0, 1.0, 2.0, 3.0};
  const auto p = observe_orbit(rot, halves, 0.1, grid);
  CHECK(p.symbols == std::vector<Symbol>{0, 0, 1, 1});
  const auto a = trajectory_symbols(rot, halves, grid, 99);
  const auto b = trajectory_symbols(rot, halves, grid, 99);
  CHECK(a.symbols == b.symbols);
}
