#ifndef OBSEQUIV_SUSPENSION_HPP
#define OBSEQUIV_SUSPENSION_HPP

#include "obsequiv/partition.hpp"
#include "obsequiv/system.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

namespace obsequiv {

/// Roof heights (seconds) indexed by the base labeling's symbols.
struct RoofFunction {
  std::vector<double> heights;

  double operator()(Symbol s) const { return heights.at(s); }
  double max() const { return *std::max_element(heights.begin(), heights.end()); }
};

/// State (k, v) of a flow built under a function: base point k, height v in
/// [0, roof(k)).
template <class Base> struct SuspensionState {
  Base base;
  double height = 0.0;
};

/// Builds the flow under the roof over a discrete base system. The base is
/// labelled by `labeling` (cells beta_i); the state rises at unit rate and
/// jumps to (V(k), 0) on reaching the roof. The invariant measure is the
/// product of the base measure and Lebesgue height measure, normalised to 1.
template <class Base>
FlowSystem<SuspensionState<Base>> build_flow_under_function(DiscreteSystem<Base> base,
                                                            ObservationFunction labeling,
                                                            RoofFunction roof) {
  using State = SuspensionState<Base>;
  if (roof.heights.size() != labeling.alphabet().size())
    throw std::invalid_argument("flow under function: need one roof height per base symbol");
  for (double u : roof.heights)
    if (!(u > 0.0) || !std::isfinite(u))
      throw std::invalid_argument("flow under function: roof heights must be positive");
  if (labeling.partition().space()->name() != base.space()->name())
    throw std::invalid_argument("flow under function: labeling is not over the base space");

  const Partition &beta = labeling.partition();
  std::vector<double> cell_roof(beta.size());
  double normalizer = 0.0;
  for (std::size_t i = 0; i < beta.size(); ++i) {
    cell_roof[i] = roof(labeling.symbol_of_cell(i));
    normalizer += cell_roof[i] * beta.cell_measure(i);
  }
  const Eigen::Index d = base.space()->dim();
  const double top = roof.max();

  Point lo(d + 1), hi(d + 1);
  lo.head(d) = base.space()->bounds().lo;
  hi.head(d) = base.space()->bounds().hi;
  lo[d] = 0.0;
  hi[d] = top;
  auto measure = [beta, cell_roof, normalizer, d](const Box &b) {
    Box base_box(b.lo.head(d), b.hi.head(d));
    double mass = 0.0;
    for (std::size_t i = 0; i < beta.size(); ++i) {
      const double h = std::min(b.hi[d], cell_roof[i]) - std::max(b.lo[d], 0.0);
      if (h <= 0.0)
        continue;
      mass += beta.space()->measure(intersect(Region{base_box}, beta.cells()[i])) * h;
    }
    return mass / normalizer;
  };
  auto space = std::make_shared<PhaseSpace>("suspension(" + base.space()->name() + ")",
                                            Box(lo, hi), std::move(measure));

  auto roof_at = [base, labeling, roof](const Base &k) {
    return roof(labeling(base.coordinates(k)));
  };

  auto evolve = [base, roof_at](const State &s, double t) {
    State out = s;
    out.height += t;
    double f = roof_at(out.base);
    while (out.height >= f) {
      out.height -= f;
      out.base = base.step(out.base);
      f = roof_at(out.base);
    }
    while (out.height < 0.0) {
      out.base = base.inverse(out.base);
      out.height += roof_at(out.base);
    }
    return out;
  };
  auto sampler = [base, roof_at, top](Rng &rng) {
    for (;;) {
      Base k = base.sample(rng);
      const double f = roof_at(k);
      if (uniform01(rng) * top < f)
        return State{std::move(k), uniform(rng, 0.0, f)};
    }
  };
  auto metric = [base](const State &a, const State &b) {
    return base.distance(a.base, b.base) + std::abs(a.height - b.height);
  };
  auto coordinates = [base, d](const State &s) {
    Point p(d + 1);
    p.head(d) = base.coordinates(s.base);
    p[d] = s.height;
    return p;
  };
  return FlowSystem<State>(std::move(space), std::move(evolve), std::move(sampler),
                           std::move(metric), std::move(coordinates));
}

} // namespace obsequiv

#endif // OBSEQUIV_SUSPENSION_HPP
