#ifndef OBSEQUIV_SAMPLER_HPP
#define OBSEQUIV_SAMPLER_HPP

#include "obsequiv/fdd.hpp"
#include "obsequiv/markov.hpp"
#include "obsequiv/random.hpp"
#include "obsequiv/representation.hpp"
#include "obsequiv/semi_markov.hpp"
#include "obsequiv/trajectory.hpp"

#include <functional>
#include <span>
#include <string>
#include <vector>

namespace obsequiv {

/// One side of an equivalence check: something that, given a seed, produces
/// an observed symbol path on a time grid. Either a system observed through
/// an observation function or a stochastic process.
struct PathSampler {
  std::vector<std::string> alphabet;
  std::function<SymbolPath(std::span<const double> grid, std::uint64_t seed)> draw;
  std::string description;
};

/// `samples` paths on `grid`, path i seeded by derive_seed(seed, stream, i).
std::vector<SymbolPath> sample_paths(const PathSampler &sampler, std::span<const double> grid,
                                     const Ensemble &ensemble, std::uint64_t stream);

template <System S>
PathSampler system_sampler(S system, ObservationFunction obs, std::string description = "system") {
  auto alphabet = obs.alphabet();
  return {std::move(alphabet),
          [system = std::move(system), obs = std::move(obs)](std::span<const double> grid,
                                                             std::uint64_t seed) {
            return trajectory_symbols(system, obs, grid, seed);
          },
          std::move(description)};
}

/// Stationary chain read at nonnegative integer grid times.
PathSampler markov_sampler(MarkovChainSpec spec);
/// I.i.d. process with the given outcome probabilities at integer times.
PathSampler iid_sampler(std::vector<std::string> alphabet, std::vector<double> probabilities);
PathSampler semi_markov_sampler(SemiMarkovSpec spec);
/// Non-stationary semi-Markov start: history block fixed, T_0 given.
PathSampler semi_markov_sampler_from(SemiMarkovSpec spec, std::vector<Symbol> block,
                                     double first_jump);
/// Phi_0(T_t(r)) on realizations r of the representation.
PathSampler shift_sampler(ShiftRepresentation rep);
/// Delta(R_t) on the flow representation. Grids must lie in [-back, horizon].
PathSampler flow_rep_sampler(SemiMarkovFlowRep rep);
/// Applies an outcome map (e.g. Gamma) to every sampled symbol.
PathSampler remap_sampler(PathSampler inner, const SymbolMap &map);

/// Chain with identical rows, i.e. an i.i.d. process.
MarkovChainSpec iid_chain(std::vector<std::string> alphabet, std::vector<double> probabilities);

} // namespace obsequiv

#endif // OBSEQUIV_SAMPLER_HPP
