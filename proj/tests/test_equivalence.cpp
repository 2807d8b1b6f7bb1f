#include "obsequiv/baker.hpp"
#include "obsequiv/billiard.hpp"
#include "obsequiv/equivalence.hpp"
#include "obsequiv/rotation.hpp"

#include <doctest.h>

#include <cmath>

using namespace obsequiv;

namespace {

PathSampler sticky() {
  Eigen::MatrixXd p(2, 2);
  p << 0.9, 0.1, 0.1, 0.9;
  return markov_sampler(MarkovChainSpec({"a", "b"}, p));
}

ObservationFunction intervals(const PhaseSpacePtr &space, std::vector<double> cuts,
                              std::vector<std::string> labels) {
  std::vector<Region> cells;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i)
    cells.push_back({Box(make_point({cuts[i]}), make_point({cuts[i + 1]}))});
  return observation_from_partition(Partition(space, cells, labels), labels);
}

} // namespace

TEST_CASE("equivalence passes for a process against itself") {
  const auto r = check_observational_equivalence(sticky(), sticky(), {Grid{0}, Grid{0, 1, 3}},
                                                 Ensemble{20000, 1, 2});
  CHECK(r.passed());
  // Bonferroni family: 2 + 8 entries.
  CHECK(r.tolerances.at("family") == doctest::Approx(10.0));
}

TEST_CASE("equivalence fails on a different law and names the event") {
  const auto r = check_observational_equivalence(sticky(), iid_sampler({"a", "b"}, {0.5, 0.5}),
                                                 {Grid{0, 1}}, Ensemble{20000, 2, 2});
  CHECK(r.verdict == Verdict::fail);
  REQUIRE(r.first_failure() != nullptr);
  CHECK(r.first_failure()->witness.find("Z[1]") != std::string::npos);
}

TEST_CASE("equivalence fails when outcome sets differ") {
  const auto r = check_observational_equivalence(sticky(), iid_sampler({"a", "c"}, {0.5, 0.5}),
                                                 {Grid{0}}, Ensemble{1000, 3, 1});
  CHECK(r.verdict == Verdict::fail);
  CHECK(r.first_failure()->witness.find("outcome sets differ") != std::string::npos);
}

TEST_CASE("equivalence is invariant to the alphabet order of side B") {
  const auto r = check_observational_equivalence(iid_sampler({"a", "b"}, {0.3, 0.7}),
                                                 iid_sampler({"b", "a"}, {0.7, 0.3}),
                                                 {Grid{0, 1}}, Ensemble{20000, 4, 2});
  CHECK(r.passed());
  CHECK_THROWS_AS(check_observational_equivalence(sticky(), sticky(), {}, Ensemble{}),
                  std::invalid_argument);
}

TEST_CASE("nontriviality: random process passes, periodic rotation fails") {
  CHECK(check_nontriviality(sticky(), {1, 2}, Ensemble{20000, 5, 2}).passed());
  const auto rot = rotation_system(1.0);
  const auto halves = observation_from_partition(grid_partition(rot.space(), {2}));
  const auto r = check_nontriviality(rot, halves, {1.0, 2.0}, Ensemble{20000, 6, 2});
  CHECK(r.verdict == Verdict::fail);
  const auto quarter = rotation_system(0.25);
  // A half turn swaps the halves; a quarter turn leaves P = 1/2.
  CHECK(check_nontriviality(quarter, halves, {2.0}, Ensemble{20000, 7, 2}).verdict == Verdict::fail);
  CHECK(check_nontriviality(quarter, halves, {1.0}, Ensemble{20000, 7, 2}).passed());
  CHECK_THROWS_AS(check_nontriviality(sticky(), {0.0}, Ensemble{}), std::invalid_argument);
  const auto one = observation_from_partition(grid_partition(rot.space(), {1}));
  CHECK_THROWS_AS(check_nontriviality(rot, one, {1.0}, Ensemble{}), std::invalid_argument);
}

TEST_CASE("stationarity: stationary chain passes, deterministic start fails") {
  CHECK(check_stationarity(sticky(), {0, 1}, {1, 4}, Ensemble{20000, 8, 2}).passed());
  const SemiMarkovSpec s(MarkovChainSpec({"s1", "s2"}, Eigen::MatrixXd::Constant(2, 2, 0.5)),
                         {HoldingTime(1), HoldingTime(1, 1, 2)});
  CHECK(check_stationarity(semi_markov_sampler(s), {0, 0.5}, {0.25, 2.0}, Ensemble{20000, 9, 2}).passed());
  const auto fixed = semi_markov_sampler_from(s, {0}, 1.0);
  CHECK(check_stationarity(fixed, {0}, {1.0}, Ensemble{20000, 9, 2}).verdict == Verdict::fail);
  CHECK_THROWS_AS(check_stationarity(sticky(), {0}, {}, Ensemble{}), std::invalid_argument);
}

TEST_CASE("invariant union: periodic rotation has one, irrational does not") {
  const auto halves = [](const FlowSystem<double> &s) { return grid_partition(s.space(), {2}); };
  const auto periodic = rotation_system(0.5);
  // Step 2 returns every point: each half is invariant.
  const auto r = check_invariant_union(periodic, halves(periodic), 2.0, Ensemble{20000, 10, 2});
  CHECK(r.verdict == Verdict::fail);
  REQUIRE(r.first_failure() != nullptr);
  CHECK(r.first_failure()->witness.find("invariant union") != std::string::npos);

  const auto irr = rotation_system(std::sqrt(2.0));
  const auto ok = check_invariant_union(irr, halves(irr), 1.0, Ensemble{20000, 10, 2});
  CHECK(ok.passed());
  // mu(C xor T^-1 C) for a half and shift frac(sqrt 2) is 2 * min(b, 1 - b) with b = 0.414...
  const double b = std::sqrt(2.0) - 1.0;
  CHECK(ok.items.front().estimate == doctest::Approx(2 * std::min(b, 1 - b)).epsilon(0.03));
}

TEST_CASE("epsilon-congruence on the circle against the cell-centre bound") {
  const auto rot = rotation_system(std::sqrt(2.0));
  const auto quarters = observation_from_partition(grid_partition(rot.space(), {4}));
  std::function<Symbol(const double &)> enc = [quarters](const double &m) {
    return quarters(make_point({m}));
  };
  std::function<double(const Symbol &)> emb = [](const Symbol &s) { return 0.125 + 0.25 * s; };
  const auto pass = check_epsilon_congruence(rot, enc, emb, 0.2, Ensemble{20000, 11, 2});
  CHECK(pass.passed());
  CHECK(pass.items.back().estimate <= 0.125);
  // Distance >= 0.1 from a centre covers 0.05 of each 0.25 cell.
  const auto fail = check_epsilon_congruence(rot, enc, emb, 0.1, Ensemble{20000, 11, 2});
  CHECK(fail.verdict == Verdict::fail);
  CHECK(fail.items.front().estimate == doctest::Approx(0.2).epsilon(0.05));
  CHECK_THROWS_AS(check_epsilon_congruence(rot, enc, emb, 0.0, Ensemble{}), std::invalid_argument);
}

TEST_CASE("exact disagreement and mapped alphabets") {
  const auto rot = rotation_system(std::sqrt(2.0));
  const auto phi = intervals(rot.space(), {0, 0.5, 1}, {"o1", "o2"});
  const auto psi = intervals(rot.space(), {0, 0.51, 1}, {"o1", "o2"});
  CHECK(*exact_disagreement(phi, psi, std::nullopt) == doctest::Approx(0.01));
  const auto q = intervals(rot.space(), {0, 0.25, 0.5, 0.75, 1}, {"q1", "q2", "q3", "q4"});
  const SymbolMap gamma{{"q1", "o1"}, {"q2", "o1"}, {"q3", "o2"}, {"q4", "o2"}};
  CHECK(mapped_alphabet(q, gamma) == std::vector<std::string>{"o1", "o2"});
  CHECK(*exact_disagreement(phi, q, gamma) == doctest::Approx(0.0));
  const SymbolMap twisted{{"q1", "o1"}, {"q2", "o2"}, {"q3", "o2"}, {"q4", "o2"}};
  CHECK(*exact_disagreement(phi, q, twisted) == doctest::Approx(0.25));
}

TEST_CASE("simulation checks on the rotation") {
  const auto rot = rotation_system(std::sqrt(2.0));
  const auto phi = intervals(rot.space(), {0, 0.5, 1}, {"o1", "o2"});
  const auto psi = intervals(rot.space(), {0, 0.51, 1}, {"o1", "o2"});
  const auto q = intervals(rot.space(), {0, 0.25, 0.5, 0.75, 1}, {"q1", "q2", "q3", "q4"});
  const SymbolMap gamma{{"q1", "o1"}, {"q2", "o1"}, {"q3", "o2"}, {"q4", "o2"}};
  const Ensemble ens{20000, 12, 2};

  CHECK(check_simulation(SimulationMode::strong, rot, phi, phi, std::nullopt, 1e-3, {}, ens).passed());
  CHECK(check_simulation(SimulationMode::strong, rot, phi, psi, std::nullopt, 0.05, {Grid{0, 1}}, ens)
            .passed());
  CHECK(check_simulation(SimulationMode::strong, rot, phi, psi, std::nullopt, 0.005, {}, ens).verdict ==
        Verdict::fail);
  // A strong pass is a weak pass with the identity merge.
  const SymbolMap identity{{"o1", "o1"}, {"o2", "o2"}};
  CHECK(check_simulation(SimulationMode::weak, rot, phi, psi, identity, 0.05, {}, ens).passed());
  const auto weak = check_simulation(SimulationMode::weak, rot, phi, q, gamma, 1e-3, {Grid{0, 0.5}}, ens);
  CHECK(weak.passed());
  CHECK(weak.check == "weak-simulation");
  // The refinement alone has the wrong outcome set for strong simulation.
  const auto strong_q = check_simulation(SimulationMode::strong, rot, phi, q, std::nullopt, 0.5, {}, ens);
  CHECK(strong_q.verdict == Verdict::fail);
  CHECK(strong_q.items.front().witness == "outcome sets differ");
  CHECK_THROWS_AS(check_simulation(SimulationMode::weak, rot, phi, q, std::nullopt, 0.1, {}, ens),
                  std::invalid_argument);
  const SymbolMap partial{{"q1", "o1"}};
  CHECK_THROWS_AS(check_simulation(SimulationMode::weak, rot, phi, q, partial, 0.1, {}, ens),
                  std::exception);
}

TEST_CASE("checker outputs are reproducible across worker counts") {
  const auto a = check_observational_equivalence(sticky(), sticky(), {Grid{0, 2}}, Ensemble{5000, 13, 1});
  const auto b = check_observational_equivalence(sticky(), sticky(), {Grid{0, 2}}, Ensemble{5000, 13, 4});
  REQUIRE(a.items.size() == b.items.size());
  for (std::size_t i = 0; i < a.items.size(); ++i) {
    CHECK(a.items[i].estimate == b.items[i].estimate);
    CHECK(a.items[i].count == b.items[i].count);
  }
}

TEST_CASE("billiard with the quadrant observation is nontrivial at a long lag") {
  const auto bill = billiard_system(1.0, 1.0, {Obstacle{Eigen::Vector2d(0.5, 0.5), 0.2}}, 1.0);
  const auto quad = observation_from_partition(grid_partition(bill.space(), {2, 2, 1}));
  CHECK(check_nontriviality(bill, quad, {5.0}, Ensemble{10000, 14, 2}).passed());
}

TEST_CASE("baker map: no invariant union of dyadic cells") {
  const auto baker = baker_system();
  CHECK(check_invariant_union(baker, dyadic_square_partition(1), 1.0, Ensemble{20000, 15, 2}).passed());
}
