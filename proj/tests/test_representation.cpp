#include "obsequiv/equivalence.hpp"
#include "obsequiv/representation.hpp"
#include "obsequiv/sampler.hpp"

#include <doctest.h>

#include <cmath>

using namespace obsequiv;

namespace {

MarkovChainSpec sticky_chain() {
  Eigen::MatrixXd p(2, 2);
  p << 0.9, 0.1, 0.5, 0.5;
  return MarkovChainSpec({"a", "b"}, p);
}

SemiMarkovSpec coin_semi_markov() {
  return SemiMarkovSpec(MarkovChainSpec({"s1", "s2"}, Eigen::MatrixXd::Constant(2, 2, 0.5)),
                        {HoldingTime(1), HoldingTime(1, 1, 2)});
}

SemiMarkovSpec two_step_semi_markov() {
  Eigen::MatrixXd p(4, 2);
  p << 0.7, 0.3, 0.4, 0.6, 0.2, 0.8, 0.5, 0.5;
  return SemiMarkovSpec(MarkovChainSpec({"a", "b"}, 2, p), {HoldingTime(1), HoldingTime(1, 1, 3)});
}

} // namespace

TEST_CASE("sequence shift steps through a fixed window") {
  auto draw = [](Rng &) { return std::vector<Symbol>{0, 1, 1, 0, 1}; };
  const auto sys = sequence_shift_system("seq", {0.4, 0.6}, draw, 1);
  Rng rng(1);
  const auto x = sys.sample(rng);
  CHECK(x.index == 1);
  CHECK(x.current() == 1);
  CHECK(sys.evolve(x, 2.0).current() == 0);
  CHECK(sys.evolve(x, -1.0).current() == 0);
  CHECK(sys.coordinates(sys.evolve(x, 3.0))[0] == 1.0);
  CHECK_THROWS_AS(sys.evolve(x, -2.0), std::out_of_range);
  CHECK_THROWS_AS(sys.evolve(x, 4.0), std::out_of_range);
  CHECK(sys.distance(x, x) == 0.0);
  CHECK(sys.distance(x, sys.step(x)) > 0.0);
  CHECK(sys.space()->measure(Box(make_point({1.0}), make_point({2.0}))) == doctest::Approx(0.6));
}

TEST_CASE("markov shift fixture follows its transition matrix") {
  Eigen::MatrixXd flip(2, 2);
  flip << 0, 1, 1, 0;
  Eigen::VectorXd start(2);
  start << 1, 0;
  const auto sys = markov_shift_system(flip, start, 8);
  Rng rng(2);
  auto x = sys.sample(rng);
  for (int k = 0; k < 7; ++k) {
    CHECK(x.current() == Symbol(k % 2));
    x = sys.step(x);
  }
}

TEST_CASE("shift representation reads Phi_0 off shifted realizations") {
  const ShiftRepresentation rep(sticky_chain(), 20.0);
  CHECK(rep.discrete_time());
  CHECK(rep.alphabet() == std::vector<std::string>{"a", "b"});
  Rng rng(3);
  const auto r = rep.sample(rng);
  for (double t : {0.0, 1.0, 5.0, 13.0}) {
    const auto s = ShiftRepresentation::shift(r, t);
    CHECK(ShiftRepresentation::observe(s) == r.path->at(t));
    CHECK(rep.observation()(make_point({double(ShiftRepresentation::observe(s))})) ==
          ShiftRepresentation::observe(s));
  }
  const auto two = ShiftRepresentation::shift(ShiftRepresentation::shift(r, 2.0), 3.0);
  CHECK(two.offset == doctest::Approx(5.0));
  CHECK(rep.space()->measure(Box(make_point({0.0}), make_point({1.0}))) == doctest::Approx(5.0 / 6));
}

TEST_CASE("shift representation requires an order-1 chain") {
  CHECK_THROWS_AS(ShiftRepresentation(two_step_semi_markov().chain()), std::invalid_argument);
  CHECK_NOTHROW(ShiftRepresentation(block_embedding(two_step_semi_markov().chain())));
}

TEST_CASE("shift representation as a flow satisfies the semigroup law") {
  const ShiftRepresentation rep(coin_semi_markov(), 30.0);
  CHECK_FALSE(rep.discrete_time());
  const auto sys = rep.as_system();
  Rng rng(4);
  for (int i = 0; i < 100; ++i) {
    const auto r = sys.sample(rng);
    const double t1 = uniform(rng, 0, 5), t2 = uniform(rng, 0, 5);
    REQUIRE(sys.distance(sys.evolve(r, t1 + t2), sys.evolve(sys.evolve(r, t1), t2)) < 1e-9);
  }
}

TEST_CASE("markov chain and its shift representation are observationally equivalent") {
  const auto chain = sticky_chain();
  const auto r = check_observational_equivalence(
      markov_sampler(chain), shift_sampler(ShiftRepresentation(chain)),
      {Grid{0.0}, Grid{0.0, 1.0}, Grid{0.0, 2.0, 3.0}}, Ensemble{20000, 1, 2});
  CHECK(r.passed());
}

TEST_CASE("flow representation of a semi-Markov process") {
  const auto spec = coin_semi_markov();
  const SemiMarkovFlowRep flow(spec, 4.0);
  CHECK(flow.blocks().states() == spec.alphabet());
  CHECK(flow.block_symbol(1) == 1);
  CHECK(flow.delta().alphabet() == spec.alphabet());

  // Delta at time 0 follows the time-weighted marginal.
  const auto paths = sample_paths(flow_rep_sampler(flow), std::vector<double>{0.0}, Ensemble{40000, 2, 2}, 3);
  double hits = 0;
  for (const auto &p : paths)
    hits += p.symbols[0] == 1;
  const double oracle = std::sqrt(2.0) / (1 + std::sqrt(2.0));
  CHECK(std::abs(hits / 40000 - oracle) <= 4 * std::sqrt(oracle * (1 - oracle) / 40000));

  const auto sampler = flow_rep_sampler(flow);
  CHECK_THROWS_AS(sampler.draw(std::vector<double>{0.0, 5.0}, 1), std::invalid_argument);
  CHECK_THROWS_AS(sampler.draw(std::vector<double>{-0.5, 1.0}, 1), std::invalid_argument);
  const SemiMarkovFlowRep back(spec, 4.0, 1.0);
  CHECK_NOTHROW(flow_rep_sampler(back).draw(std::vector<double>{-0.5, 1.0}, 1));
  CHECK_THROWS_AS(SemiMarkovFlowRep(spec, 0.0), std::invalid_argument);
}

TEST_CASE("flow representation roof follows the first block symbol") {
  const auto spec = two_step_semi_markov();
  const SemiMarkovFlowRep flow(spec, 6.0, 2.0);
  REQUIRE(flow.blocks().size() == 4);
  for (Symbol b = 0; b < 4; ++b)
    CHECK(flow.block_symbol(b) == Symbol(b / 2));
  const auto &sys = flow.system();
  Rng rng(7);
  for (int i = 0; i < 100; ++i) {
    const auto x = sys.sample(rng);
    const Symbol first = flow.block_symbol(x.base.current());
    REQUIRE(x.height < spec.holding(first));
    const double t1 = uniform(rng, -1, 2), t2 = uniform(rng, -1, 2);
    REQUIRE(sys.distance(sys.evolve(x, t1 + t2), sys.evolve(sys.evolve(x, t1), t2)) < 1e-9);
  }
}

TEST_CASE("order-2 semi-Markov process matches its flow representation") {
  const auto spec = two_step_semi_markov();
  const auto r = check_observational_equivalence(
      semi_markov_sampler(spec), flow_rep_sampler(SemiMarkovFlowRep(spec, 3.0)),
      {Grid{0.0}, Grid{0.0, 0.9}, Grid{0.0, 1.3, 2.6}}, Ensemble{20000, 5, 2});
  CHECK(r.passed());
}

TEST_CASE("semi-Markov shift representation is equivalent to the process") {
  const auto spec = coin_semi_markov();
  const auto r = check_observational_equivalence(semi_markov_sampler(spec),
                                                 shift_sampler(ShiftRepresentation(spec, 4.0)),
                                                 {Grid{0.0, 0.7}, Grid{0.2, 1.5, 2.5}},
                                                 Ensemble{20000, 6, 2});
  CHECK(r.passed());
}

TEST_CASE("atom partition sees the current symbol") {
  const auto s = atomic_space("atoms", {1, 1, 2});
  const auto p = atom_partition(s, {"x", "y", "z"});
  CHECK(p.size() == 3);
  CHECK(p.locate(make_point({2.0})) == 2);
  CHECK(p.cell_measure(2) == doctest::Approx(0.5));
}
