#ifndef OBSEQUIV_SYSTEM_HPP
#define OBSEQUIV_SYSTEM_HPP

#include "obsequiv/geometry.hpp"
#include "obsequiv/random.hpp"

#include <cmath>
#include <concepts>
#include <functional>
#include <stdexcept>
#include <string>

namespace obsequiv {

/// Measure-preserving deterministic system with continuous time: evolution
/// T_t, a sampler for the invariant measure, a metric, and the coordinates
/// by which partitions of the phase space see a state.
template <class State> class FlowSystem {
public:
  using state_type = State;
  using Evolve = std::function<State(const State &, double)>;
  using Sampler = std::function<State(Rng &)>;
  using Metric = std::function<double(const State &, const State &)>;
  using Coordinates = std::function<Point(const State &)>;

  FlowSystem(PhaseSpacePtr space, Evolve evolve, Sampler sampler, Metric metric,
             Coordinates coordinates)
      : space_(std::move(space)), evolve_(std::move(evolve)), sampler_(std::move(sampler)),
        metric_(std::move(metric)), coordinates_(std::move(coordinates)) {}

  const PhaseSpacePtr &space() const { return space_; }
  State evolve(const State &s, double t) const { return evolve_(s, t); }
  State sample(Rng &rng) const { return sampler_(rng); }
  double distance(const State &a, const State &b) const { return metric_(a, b); }
  Point coordinates(const State &s) const { return coordinates_(s); }
  static constexpr bool discrete_time = false;

private:
  PhaseSpacePtr space_;
  Evolve evolve_;
  Sampler sampler_;
  Metric metric_;
  Coordinates coordinates_;
};

/// Discrete measure-preserving system: bijective step T and its inverse.
/// `evolve(s, n)` applies T^n for integer n.
template <class State> class DiscreteSystem {
public:
  using state_type = State;
  using Step = std::function<State(const State &)>;
  using Sampler = std::function<State(Rng &)>;
  using Metric = std::function<double(const State &, const State &)>;
  using Coordinates = std::function<Point(const State &)>;

  DiscreteSystem(PhaseSpacePtr space, Step step, Step inverse, Sampler sampler, Metric metric,
                 Coordinates coordinates)
      : space_(std::move(space)), step_(std::move(step)), inverse_(std::move(inverse)),
        sampler_(std::move(sampler)), metric_(std::move(metric)),
        coordinates_(std::move(coordinates)) {}

  const PhaseSpacePtr &space() const { return space_; }
  State step(const State &s) const { return step_(s); }
  State inverse(const State &s) const { return inverse_(s); }
  State sample(Rng &rng) const { return sampler_(rng); }
  double distance(const State &a, const State &b) const { return metric_(a, b); }
  Point coordinates(const State &s) const { return coordinates_(s); }
  static constexpr bool discrete_time = true;

  State evolve(const State &s, double t) const {
    const double n = std::round(t);
    if (std::abs(n - t) > 1e-9)
      throw std::invalid_argument("discrete system evolved by non-integer time " +
                                  std::to_string(t));
    State out = s;
    for (long long k = 0; k < static_cast<long long>(std::abs(n)); ++k)
      out = n > 0 ? step_(out) : inverse_(out);
    return out;
  }

private:
  PhaseSpacePtr space_;
  Step step_;
  Step inverse_;
  Sampler sampler_;
  Metric metric_;
  Coordinates coordinates_;
};

/// Anything the checkers can sample, evolve and observe.
template <class S>
concept System = requires(const S &sys, const typename S::state_type &x, Rng &rng, double t) {
  { sys.evolve(x, t) } -> std::convertible_to<typename S::state_type>;
  { sys.sample(rng) } -> std::convertible_to<typename S::state_type>;
  { sys.distance(x, x) } -> std::convertible_to<double>;
  { sys.coordinates(x) } -> std::convertible_to<Point>;
  { sys.space() } -> std::convertible_to<PhaseSpacePtr>;
};

} // namespace obsequiv

#endif // OBSEQUIV_SYSTEM_HPP
