#include "obsequiv/representation.hpp"

#include <cmath>
#include <stdexcept>

namespace obsequiv {

namespace {

double sequence_metric(const SequencePoint &a, const SequencePoint &b) {
  // Compare the windows around the two read positions, 2^{-(|k|+1)} per mismatch.
  double d = 0.0;
  for (long k = -16; k <= 16; ++k) {
    const long ia = static_cast<long>(a.index) + k, ib = static_cast<long>(b.index) + k;
    if (ia < 0 || ib < 0 || ia >= static_cast<long>(a.sequence->size()) ||
        ib >= static_cast<long>(b.sequence->size()))
      continue;
    if ((*a.sequence)[static_cast<std::size_t>(ia)] != (*b.sequence)[static_cast<std::size_t>(ib)])
      d += std::ldexp(1.0, -static_cast<int>(std::abs(k) + 1));
  }
  return d;
}

std::vector<double> to_std(const Eigen::VectorXd &v) { return {v.begin(), v.end()}; }

DiscreteSystem<SequencePoint> block_base(const MarkovChainSpec &blocks, const SemiMarkovSpec &spec,
                                         double horizon, double back) {
  const double umin = spec.min_holding();
  const auto back_steps = static_cast<std::size_t>(std::ceil(back / umin)) + 1;
  const auto length = back_steps + static_cast<std::size_t>(std::ceil(horizon / umin)) + 3;
  return sequence_shift_system(
      "blocks", to_std(blocks.diagnostics().state_marginal),
      [blocks, length](Rng &rng) { return sample_chain(blocks, length, rng); }, back_steps);
}

ObservationFunction first_symbol_labeling(const PhaseSpacePtr &space,
                                          const std::vector<Symbol> &block_first,
                                          const std::vector<std::string> &alphabet,
                                          double height) {
  std::vector<Region> cells(alphabet.size());
  const bool flow = height > 0.0;
  for (std::size_t b = 0; b < block_first.size(); ++b) {
    const double x = static_cast<double>(b);
    cells[block_first[b]].push_back(flow ? Box(make_point({x, 0.0}), make_point({x + 1.0, height}))
                                         : Box(make_point({x}), make_point({x + 1.0})));
  }
  return observation_from_partition(Partition(space, std::move(cells), alphabet), alphabet);
}

} // namespace

DiscreteSystem<SequencePoint> sequence_shift_system(
    std::string name, std::vector<double> symbol_weights,
    std::function<std::vector<Symbol>(Rng &)> draw, std::size_t back) {
  auto space = atomic_space(std::move(name), std::move(symbol_weights));
  auto step = [](const SequencePoint &p) {
    if (p.index + 1 >= p.sequence->size())
      throw std::out_of_range("sequence shift: stepped past the sampled window");
    return SequencePoint{p.sequence, p.index + 1};
  };
  auto inverse = [](const SequencePoint &p) {
    if (p.index == 0)
      throw std::out_of_range("sequence shift: stepped before the sampled window");
    return SequencePoint{p.sequence, p.index - 1};
  };
  auto sampler = [draw = std::move(draw), back](Rng &rng) {
    auto seq = std::make_shared<const std::vector<Symbol>>(draw(rng));
    if (seq->size() <= back)
      throw std::invalid_argument("sequence shift: sampled window shorter than its back part");
    return SequencePoint{std::move(seq), back};
  };
  auto coordinates = [](const SequencePoint &p) {
    return make_point({static_cast<double>(p.current())});
  };
  return DiscreteSystem<SequencePoint>(std::move(space), std::move(step), std::move(inverse),
                                       std::move(sampler), sequence_metric,
                                       std::move(coordinates));
}

DiscreteSystem<SequencePoint> markov_shift_system(const MarkovChainSpec &spec,
                                                  std::size_t length, std::size_t back) {
  spec.require_valid("markov_shift_system");
  return sequence_shift_system(
      "markov-shift", to_std(spec.diagnostics().state_marginal),
      [spec, length](Rng &rng) { return sample_chain(spec, length, rng); }, back);
}

DiscreteSystem<SequencePoint> markov_shift_system(const Eigen::MatrixXd &transitions,
                                                  const Eigen::VectorXd &initial,
                                                  std::size_t length) {
  return sequence_shift_system(
      "markov-shift", to_std(initial),
      [transitions, initial, length](Rng &rng) {
        return sample_chain_from(transitions, initial, length, rng);
      },
      0);
}

Partition atom_partition(PhaseSpacePtr space, std::vector<std::string> labels) {
  std::vector<Region> cells;
  for (std::size_t i = 0; i < labels.size(); ++i)
    cells.push_back({Box(make_point({double(i)}), make_point({double(i) + 1.0}))});
  return Partition(std::move(space), std::move(cells), std::move(labels));
}

ShiftRepresentation::ShiftRepresentation(MarkovChainSpec spec, double horizon)
    : markov_(std::move(spec)), horizon_(horizon) {
  markov_->require_valid("shift_representation");
  if (markov_->order() != 1)
    throw std::invalid_argument("shift_representation: use block_embedding for order n > 1");
  space_ = atomic_space("realizations", to_std(markov_->diagnostics().state_marginal));
  phi0_ = std::make_shared<const ObservationFunction>(
      observation_from_partition(atom_partition(space_, markov_->states())));
}

ShiftRepresentation::ShiftRepresentation(SemiMarkovSpec spec, double horizon)
    : semi_(std::move(spec)), horizon_(horizon) {
  space_ = atomic_space("realizations", to_std(semi_->time_marginal()));
  phi0_ = std::make_shared<const ObservationFunction>(
      observation_from_partition(atom_partition(space_, semi_->alphabet())));
}

const std::vector<std::string> &ShiftRepresentation::alphabet() const {
  return markov_ ? markov_->states() : semi_->alphabet();
}

Realization ShiftRepresentation::sample(Rng &rng, double horizon) const {
  if (!(horizon >= 0.0))
    throw std::invalid_argument("shift representation: negative horizon");
  RealizationPath path;
  if (markov_) {
    const auto n = static_cast<std::size_t>(std::floor(horizon)) + 2;
    path.symbols = sample_chain(*markov_, n, rng);
    for (std::size_t k = 0; k <= n; ++k)
      path.epochs.push_back(static_cast<double>(k));
    path.sojourns.assign(n, 1.0);
  } else {
    path = sample_semi_markov(*semi_, std::max(horizon, semi_->min_holding()), rng);
  }
  return {std::make_shared<const RealizationPath>(std::move(path)), 0.0};
}

FlowSystem<Realization> ShiftRepresentation::as_system() const {
  auto self = *this;
  auto evolve = [](const Realization &r, double t) { return shift(r, t); };
  auto sampler = [self](Rng &rng) { return self.sample(rng); };
  auto metric = [](const Realization &a, const Realization &b) {
    double d = 0.0;
    for (int k = 0; k < 32; ++k) {
      const double ta = a.offset + k, tb = b.offset + k;
      if (!a.path->covers(ta) || !b.path->covers(tb))
        continue;
      if (a.path->at(ta) != b.path->at(tb))
        d += std::ldexp(1.0, -(k + 1));
    }
    return d;
  };
  auto coordinates = [](const Realization &r) {
    return make_point({static_cast<double>(observe(r))});
  };
  return FlowSystem<Realization>(space_, std::move(evolve), std::move(sampler),
                                 std::move(metric), std::move(coordinates));
}

ShiftRepresentation shift_representation(const MarkovChainSpec &spec, double horizon) {
  return ShiftRepresentation(spec, horizon);
}

ShiftRepresentation shift_representation(const SemiMarkovSpec &spec, double horizon) {
  return ShiftRepresentation(spec, horizon);
}

namespace {

std::vector<Symbol> first_symbols(const MarkovChainSpec &chain) {
  std::vector<Symbol> out;
  for (std::size_t b : chain.diagnostics().recurrent_blocks)
    out.push_back(chain.first_symbol(b));
  return out;
}

} // namespace

SemiMarkovFlowRep::SemiMarkovFlowRep(SemiMarkovSpec spec, double horizon, double back)
    : spec_(std::move(spec)), blocks_(block_embedding(spec_.chain())),
      block_first_(first_symbols(spec_.chain())), horizon_(horizon), back_(back),
      base_(block_base(blocks_, spec_, horizon, back)),
      labeling_(first_symbol_labeling(base_.space(), block_first_, spec_.alphabet(), 0.0)),
      flow_(build_flow_under_function(base_, labeling_, RoofFunction{spec_.holding_values()})),
      delta_(first_symbol_labeling(flow_.space(), block_first_, spec_.alphabet(),
                                   spec_.max_holding())) {
  if (!(horizon > 0.0) || !(back >= 0.0))
    throw std::invalid_argument("flow representation: need horizon > 0 and back >= 0");
}

SemiMarkovFlowRep semi_markov_flow_representation(const SemiMarkovSpec &spec, double horizon,
                                                  double back) {
  return SemiMarkovFlowRep(spec, horizon, back);
}

} // namespace obsequiv
