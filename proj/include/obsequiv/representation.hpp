#ifndef OBSEQUIV_REPRESENTATION_HPP
#define OBSEQUIV_REPRESENTATION_HPP

#include "obsequiv/markov.hpp"
#include "obsequiv/semi_markov.hpp"
#include "obsequiv/suspension.hpp"
#include "obsequiv/system.hpp"

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace obsequiv {

/// Point of a symbol-sequence shift: a finite window of a bi-infinite
/// sequence and the position currently read as "time 0".
struct SequencePoint {
  std::shared_ptr<const std::vector<Symbol>> sequence;
  std::size_t index = 0;

  Symbol current() const { return (*sequence)[index]; }
};

/// Shift map on sequences drawn by `draw`, starting at index `back`. The
/// phase space is atomic over symbols with the given one-time weights, so
/// partitions into unions of [i, i+1) see the current symbol. Stepping
/// outside the sampled window throws std::out_of_range.
DiscreteSystem<SequencePoint> sequence_shift_system(
    std::string name, std::vector<double> symbol_weights,
    std::function<std::vector<Symbol>(Rng &)> draw, std::size_t back);

/// Shift of a stationary chain sampled over `length` symbols, time 0 at `back`.
DiscreteSystem<SequencePoint> markov_shift_system(const MarkovChainSpec &spec,
                                                  std::size_t length, std::size_t back = 0);

/// Shift of an order-1 chain with an arbitrary initial law and no validity
/// requirement; `initial` also serves as the atom weights (test fixtures).
DiscreteSystem<SequencePoint> markov_shift_system(const Eigen::MatrixXd &transitions,
                                                  const Eigen::VectorXd &initial,
                                                  std::size_t length);

/// Partition of an atomic space over `n` symbols into its atoms.
Partition atom_partition(PhaseSpacePtr space, std::vector<std::string> labels);

/// A realization r viewed through the time shift: the point r(offset + .).
struct Realization {
  std::shared_ptr<const RealizationPath> path;
  double offset = 0.0;
};

/// Deterministic representation of a stationary process: realizations as
/// states, T_t shifts by t, Phi_0 reads the value at time 0. Markov chains
/// are realized with unit sojourns on integer times.
class ShiftRepresentation {
public:
  explicit ShiftRepresentation(MarkovChainSpec spec, double horizon = 16.0);
  explicit ShiftRepresentation(SemiMarkovSpec spec, double horizon = 16.0);

  const std::vector<std::string> &alphabet() const;
  bool discrete_time() const { return markov_.has_value(); }
  double horizon() const { return horizon_; }

  /// Realization covering [0, horizon].
  Realization sample(Rng &rng, double horizon) const;
  Realization sample(Rng &rng) const { return sample(rng, horizon_); }

  static Realization shift(const Realization &r, double t) { return {r.path, r.offset + t}; }
  /// Phi_0.
  static Symbol observe(const Realization &r) { return r.path->at(r.offset); }

  /// Atomic space over outcomes weighted by the one-time marginal.
  const PhaseSpacePtr &space() const { return space_; }
  /// Phi_0 as an observation on coordinates(r) = (Phi_0(r)).
  const ObservationFunction &observation() const { return *phi0_; }
  /// The representation as a flow. Metric: sum over k = 0..31 of
  /// 2^{-(k+1)} [r(k) != r'(k)] on the covered integer times.
  FlowSystem<Realization> as_system() const;

private:
  std::optional<MarkovChainSpec> markov_;
  std::optional<SemiMarkovSpec> semi_;
  double horizon_;
  PhaseSpacePtr space_;
  std::shared_ptr<const ObservationFunction> phi0_;
};

ShiftRepresentation shift_representation(const MarkovChainSpec &spec, double horizon = 16.0);
ShiftRepresentation shift_representation(const SemiMarkovSpec &spec, double horizon = 16.0);

/// Flow built under the holding-time roof over the shift of the n-block
/// chain {B_k}. Base states are sequences of block indices; the roof of a
/// block is u of its first symbol; Delta maps (block, height) to that symbol.
class SemiMarkovFlowRep {
public:
  using BaseState = SequencePoint;
  using State = SuspensionState<SequencePoint>;

  /// Trajectories stay inside the sampled window for t in [-back, horizon].
  SemiMarkovFlowRep(SemiMarkovSpec spec, double horizon, double back = 0.0);

  const SemiMarkovSpec &spec() const { return spec_; }
  const MarkovChainSpec &blocks() const { return blocks_; }
  const DiscreteSystem<SequencePoint> &base() const { return base_; }
  const FlowSystem<State> &system() const { return flow_; }
  /// Labeling of the base by first symbol of each block (the cells beta_i).
  const ObservationFunction &labeling() const { return labeling_; }
  /// Delta.
  const ObservationFunction &delta() const { return delta_; }
  double horizon() const { return horizon_; }
  double back() const { return back_; }
  /// Outcome symbol of block index b of the embedded chain.
  Symbol block_symbol(Symbol b) const { return block_first_[b]; }

private:
  SemiMarkovSpec spec_;
  MarkovChainSpec blocks_;
  std::vector<Symbol> block_first_;
  double horizon_;
  double back_;
  DiscreteSystem<SequencePoint> base_;
  ObservationFunction labeling_;
  FlowSystem<State> flow_;
  ObservationFunction delta_;
};

SemiMarkovFlowRep semi_markov_flow_representation(const SemiMarkovSpec &spec, double horizon,
                                                  double back = 0.0);

} // namespace obsequiv

#endif // OBSEQUIV_REPRESENTATION_HPP
