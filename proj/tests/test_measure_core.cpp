#include "obsequiv/fdd.hpp"
#include "obsequiv/geometry.hpp"
#include "obsequiv/partition.hpp"
#include "obsequiv/random.hpp"
#include "obsequiv/report.hpp"
#include "obsequiv/stats.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>
#include <set>

using namespace obsequiv;

namespace {

PhaseSpacePtr unit_interval() { return lebesgue_space("interval", Box(make_point({0.0}), make_point({1.0}))); }

Region interval(double a, double b) { return {Box(make_point({a}), make_point({b}))}; }

// Standard normal upper tail, independent of the library's quantile backend.
double upper_tail(double z) { return 0.5 * std::erfc(z / std::numbers::sqrt2); }

SymbolPath path_of(std::vector<double> times, std::vector<Symbol> symbols) {
  return SymbolPath{std::move(times), std::move(symbols)};
}

} // namespace

TEST_CASE("box containment is half-open and volume is the coordinate product") {
  const Box b(make_point({0.0, 1.0}), make_point({2.0, 4.0}));
  CHECK(b.contains(make_point({0.0, 1.0})));
  CHECK_FALSE(b.contains(make_point({2.0, 1.0})));
  CHECK_FALSE(b.contains(make_point({1.0, 4.0})));
  CHECK(b.volume() == doctest::Approx(6.0));
  CHECK_THROWS_AS(Box(make_point({0.0}), make_point({1.0, 1.0})), std::invalid_argument);
}

TEST_CASE("box intersection") {
  const Box a(make_point({0.0, 0.0}), make_point({2.0, 2.0}));
  const Box b(make_point({1.0, 1.5}), make_point({3.0, 3.0}));
  const Box c = intersect(a, b);
  CHECK(c.volume() == doctest::Approx(0.5));
  CHECK(intersect(a, Box(make_point({2.0, 0.0}), make_point({3.0, 1.0}))).empty());
}

TEST_CASE("lebesgue measure is normalized over the bounds") {
  const auto sq = lebesgue_space("sq", Box(make_point({0.0, 0.0}), make_point({2.0, 1.0})));
  CHECK(sq->measure(Box(make_point({0.0, 0.0}), make_point({1.0, 1.0}))) == doctest::Approx(0.5));
  // Boxes are clipped to the bounds.
  CHECK(sq->measure(Box(make_point({-5.0, -5.0}), make_point({5.0, 5.0}))) == doctest::Approx(1.0));
}

TEST_CASE("atomic space puts mass on integer atoms") {
  const auto s = atomic_space("atoms", {1.0, 3.0});
  CHECK(s->measure(Box(make_point({0.0}), make_point({1.0}))) == doctest::Approx(0.25));
  CHECK(s->measure(Box(make_point({0.5}), make_point({2.0}))) == doctest::Approx(0.75));
  CHECK_THROWS_AS(atomic_space("zero", {0.0, 0.0}), std::invalid_argument);
}

TEST_CASE("disc-rectangle area matches closed forms and a Monte Carlo oracle") {
  const double r = 0.3;
  CHECK(disc_rectangle_area(0, 0, r, -1, 1, -1, 1) == doctest::Approx(std::numbers::pi * r * r));
  CHECK(disc_rectangle_area(0, 0, r, 0, 1, 0, 1) == doctest::Approx(std::numbers::pi * r * r / 4));
  CHECK(disc_rectangle_area(0, 0, r, 0, 1, -1, 1) == doctest::Approx(std::numbers::pi * r * r / 2));
  CHECK(disc_rectangle_area(0, 0, r, 0.5, 1, 0.5, 1) == 0.0);

  // Off-centre rectangle cutting an arc.
  const double x0 = 0.6, x1 = 0.95, y0 = 0.3, y1 = 0.7, cx = 0.5, cy = 0.5;
  Rng rng(17);
  const int n = 400000;
  int hits = 0;
  for (int i = 0; i < n; ++i) {
    const double x = uniform(rng, x0, x1), y = uniform(rng, y0, y1);
    hits += (x - cx) * (x - cx) + (y - cy) * (y - cy) < r * r;
  }
  const double area = (x1 - x0) * (y1 - y0);
  const double p = double(hits) / n;
  const double mc = p * area;
  const double tol = 4.0 * area * std::sqrt(p * (1 - p) / n);
  CHECK(std::abs(disc_rectangle_area(cx, cy, r, x0, x1, y0, y1) - mc) < tol);
}

TEST_CASE("partition construction validates disjointness and cover") {
  const auto s = unit_interval();
  CHECK_NOTHROW(Partition(s, {interval(0, 0.3), interval(0.3, 1)}, {"a", "b"}));
  CHECK_THROWS_AS(Partition(s, {interval(0, 0.5), interval(0.4, 1)}, {"a", "b"}),
                  std::invalid_argument);
  CHECK_THROWS_AS(Partition(s, {interval(0, 0.5), interval(0.6, 1)}, {"a", "b"}),
                  std::invalid_argument);
  CHECK_THROWS_AS(Partition(s, {interval(0, 1)}, {"a", "b"}), std::invalid_argument);
}

TEST_CASE("partition locate and cell measures") {
  const Partition p(unit_interval(), {interval(0, 0.25), Region{Box(make_point({0.25}), make_point({0.5})), Box(make_point({0.75}), make_point({1.0}))}, interval(0.5, 0.75)},
                    {"a", "b", "c"});
  CHECK(p.locate(make_point({0.1})) == 0);
  CHECK(p.locate(make_point({0.9})) == 1);
  CHECK(p.locate(make_point({0.6})) == 2);
  CHECK(p.cell_measure(1) == doctest::Approx(0.5));
  CHECK(p.nontrivial());
}

TEST_CASE("grid partition is row-major with the last coordinate fastest") {
  const auto sq = lebesgue_space("sq", Box(make_point({0.0, 0.0}), make_point({1.0, 1.0})));
  const auto p = grid_partition(sq, {2, 3});
  CHECK(p.size() == 6);
  CHECK(p.locate(make_point({0.1, 0.9})) == 2);
  CHECK(p.locate(make_point({0.6, 0.1})) == 3);
  for (std::size_t i = 0; i < p.size(); ++i)
    CHECK(p.cell_measure(i) == doctest::Approx(1.0 / 6));
  CHECK_THROWS_AS(grid_partition(sq, {2}), std::invalid_argument);
  CHECK_THROWS_AS(grid_partition(sq, {2, 0}), std::invalid_argument);
}

TEST_CASE("common refinement keeps positive intersections") {
  const auto s = unit_interval();
  const Partition a(s, {interval(0, 0.5), interval(0.5, 1)}, {"a0", "a1"});
  const Partition b(s, {interval(0, 0.25), interval(0.25, 1)}, {"b0", "b1"});
  const auto r = refine(a, b);
  REQUIRE(r.size() == 3);
  CHECK(r.labels()[0] == "a0|b0");
  CHECK(r.labels()[2] == "a1|b1");
  CHECK(r.cell_measure(1) == doctest::Approx(0.25));
}

TEST_CASE("observation merges cells with equal labels and rejects null cells") {
  const auto s = unit_interval();
  const auto obs = observation_from_partition(
      Partition(s, {interval(0, 0.2), interval(0.2, 0.7), interval(0.7, 1)}, {"x", "y", "z"}),
      {"x", "y", "x"});
  CHECK(obs.alphabet() == std::vector<std::string>{"x", "y"});
  CHECK(obs(make_point({0.8})) == 0);
  CHECK(obs(make_point({0.5})) == 1);
  CHECK(obs.nontrivial());

  const auto atoms = atomic_space("atoms", {1.0, 0.0});
  CHECK_THROWS_AS(observation_from_partition(Partition(atoms, {interval(0, 1), interval(1, 2)}, {"p", "q"})),
                  std::invalid_argument);
  const auto trivial = observation_from_partition(Partition(s, {interval(0, 1)}, {"only"}));
  CHECK_FALSE(trivial.nontrivial());
}

TEST_CASE("seed derivation is deterministic and separates streams") {
  CHECK(derive_seed(1, 2, 3) == derive_seed(1, 2, 3));
  std::set<std::uint64_t> seen;
  for (std::uint64_t s = 0; s < 4; ++s)
    for (std::uint64_t i = 0; i < 1000; ++i)
      seen.insert(derive_seed(42, s, i));
  CHECK(seen.size() == 4000);
}

TEST_CASE("parallel_for results do not depend on the worker count") {
  auto run = [](unsigned jobs) {
    std::vector<double> out(1001);
    parallel_for(out.size(), jobs, [&](std::size_t i) {
      Rng rng(derive_seed(7, 1, i));
      out[i] = uniform01(rng);
    });
    return out;
  };
  CHECK(run(1) == run(3));
  CHECK(run(1) == run(8));
}

TEST_CASE("uniform draws stay in range and draw_index follows the weights") {
  Rng rng(3);
  const std::vector<double> cum{0.2, 0.5, 1.0};
  std::vector<int> counts(3, 0);
  for (int i = 0; i < 100000; ++i) {
    const double u = uniform(rng, -2.0, 3.0);
    REQUIRE(u >= -2.0);
    REQUIRE(u < 3.0);
    counts[draw_index(rng, cum)]++;
  }
  CHECK(std::abs(counts[0] / 1e5 - 0.2) < 4 * std::sqrt(0.16 / 1e5));
  CHECK(std::abs(counts[2] / 1e5 - 0.5) < 4 * std::sqrt(0.25 / 1e5));
}

TEST_CASE("critical z: single comparison and Bonferroni widening") {
  CHECK(critical_z(3.0, 1) == doctest::Approx(3.0).epsilon(1e-9));
  const double z = critical_z(3.0, 10);
  // Oracle: two-sided tail of z equals the single-comparison tail over 10.
  CHECK(2 * upper_tail(z) == doctest::Approx(2 * upper_tail(3.0) / 10).epsilon(1e-6));
  TolerancePolicy off{3.0, false, 0};
  CHECK(critical_z(off, 50) == doctest::Approx(3.0));
  TolerancePolicy fixed{3.0, true, 4};
  CHECK(critical_z(fixed, 50) == doctest::Approx(critical_z(3.0, 4)));
}

TEST_CASE("wald standard error") {
  CHECK(wald_stderr(0.5, 100) == doctest::Approx(0.05));
  CHECK(wald_stderr(0.0, 100) == 0.0);
}

TEST_CASE("chi-square against uniform") {
  const std::vector<std::uint64_t> even{25, 25, 25, 25};
  const auto e = chi_square_uniform(even);
  CHECK(e.statistic == doctest::Approx(0.0));
  CHECK(e.dof == 3);
  CHECK(e.p_value == doctest::Approx(1.0));

  const std::vector<std::uint64_t> skew{10, 20};
  const auto s = chi_square_uniform(skew);
  CHECK(s.statistic == doctest::Approx(50.0 / 15.0));
  CHECK(s.dof == 1);
  // One degree of freedom: P(chi2 > x) = erfc(sqrt(x / 2)).
  CHECK(s.p_value == doctest::Approx(std::erfc(std::sqrt(s.statistic / 2))).epsilon(1e-9));
}

TEST_CASE("empirical fdd counts joint events and marginals sum to one") {
  EmpiricalFDD fdd({0.0, 1.0}, {"a", "b"});
  fdd.add(path_of({0, 1}, {0, 1}));
  fdd.add(path_of({0, 0.5, 1}, {0, 0, 0}));
  fdd.add(path_of({0, 1}, {1, 1}));
  fdd.add(path_of({0, 1}, {0, 1}));
  REQUIRE(fdd.events().size() == 4);
  CHECK(fdd.samples() == 4);
  CHECK(fdd.count(1) == 2); // (a, b)
  CHECK(fdd.probability(1) == doctest::Approx(0.5));
  CHECK(fdd.std_error(1) == doctest::Approx(std::sqrt(0.25 / 4)));
  const auto m = fdd.marginal(1);
  CHECK(m[0] + m[1] == doctest::Approx(1.0));
  CHECK(m[1] == doctest::Approx(0.75));
  CHECK_THROWS(fdd.add(path_of({0, 2}, {0, 0})));
}

TEST_CASE("all_events enumerates lexicographically") {
  const auto ev = all_events(2, 3);
  REQUIRE(ev.size() == 8);
  CHECK(ev[1] == Event{0, 0, 1});
  CHECK(ev[6] == Event{1, 1, 0});
}

TEST_CASE("compare_fdd uses the combined Wald tolerance") {
  std::vector<SymbolPath> pa, pb;
  for (int i = 0; i < 100; ++i) {
    pa.push_back(path_of({0}, {Symbol(i < 50)}));
    pb.push_back(path_of({0}, {Symbol(i < 80)}));
  }
  const auto a = estimate_fdd(pa, {"a", "b"}, {0.0});
  const auto b = estimate_fdd(pb, {"a", "b"}, {0.0});
  CHECK(compare_fdd(a, a).passed());
  const auto r = compare_fdd(a, b);
  CHECK(r.verdict == Verdict::fail);
  REQUIRE(r.first_failure() != nullptr);
  const double se = std::sqrt(0.25 / 100 + 0.16 / 100);
  CHECK(r.items[0].tolerance == doctest::Approx(critical_z(3.0, 2) * se));
}

TEST_CASE("conditional estimates against hand counts") {
  std::vector<SymbolPath> paths{path_of({0, 1, 2}, {0, 1, 0}), path_of({0, 1, 2}, {0, 0, 0}),
                                path_of({0, 1, 2}, {1, 0, 1})};
  const auto first = conditional_estimate(paths, 1.0, 0, 1, AnchorMode::first);
  CHECK(first.denominator == 2);
  CHECK(first.numerator == 1);
  // Pooled anchors at t=0 and t=1: from-state 0 at (p0,t0) (p1,t0) (p1,t1) (p2,t1).
  const auto pooled = conditional_estimate(paths, 1.0, 0, 1, AnchorMode::pooled);
  CHECK(pooled.denominator == 4);
  CHECK(pooled.numerator == 2);
  CHECK(pooled.half_width == doctest::Approx(3.0 * std::sqrt(0.25 / 4)));
  CHECK_THROWS_AS(conditional_estimate(paths, 1.0, 2, 0), UnobservedCondition);
}

TEST_CASE("report settle precedence and combine prefixes") {
  CheckReport r;
  r.items.push_back({"x", Verdict::pass});
  r.items.push_back({"y", Verdict::inconclusive});
  r.settle();
  CHECK(r.verdict == Verdict::inconclusive);
  r.items.push_back({"z", Verdict::fail});
  r.settle();
  CHECK(r.verdict == Verdict::fail);
  CHECK(r.first_failure()->label == "z");
  r.check = "sub";
  const auto c = combine("all", {r});
  CHECK(c.check == "all");
  CHECK(c.verdict == Verdict::fail);
  CHECK(c.items.front().label.find("sub") != std::string::npos);
  CHECK(std::string(to_string(Verdict::inconclusive)) == "inconclusive");
}
