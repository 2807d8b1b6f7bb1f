#include "obsequiv/sampler.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace obsequiv {

namespace {

std::vector<std::size_t> integer_times(std::span<const double> grid, const char *what) {
  require_sorted_grid(grid);
  std::vector<std::size_t> out;
  out.reserve(grid.size());
  for (double t : grid) {
    const double r = std::round(t);
    if (std::abs(r - t) > 1e-9 || r < 0.0)
      throw std::invalid_argument(std::string(what) +
                                  ": discrete-time process needs nonnegative integer times");
    out.push_back(static_cast<std::size_t>(r));
  }
  return out;
}

SymbolPath read_path(const RealizationPath &path, double offset, std::span<const double> grid) {
  SymbolPath out;
  out.times.assign(grid.begin(), grid.end());
  out.symbols.reserve(grid.size());
  for (double t : grid)
    out.symbols.push_back(path.at(offset + t));
  return out;
}

} // namespace

std::vector<SymbolPath> sample_paths(const PathSampler &sampler, std::span<const double> grid,
                                     const Ensemble &ensemble, std::uint64_t stream) {
  std::vector<SymbolPath> paths(ensemble.samples);
  parallel_for(ensemble.samples, ensemble.jobs, [&](std::size_t i) {
    paths[i] = sampler.draw(grid, derive_seed(ensemble.seed, stream, i));
  });
  return paths;
}

PathSampler markov_sampler(MarkovChainSpec spec) {
  spec.require_valid("markov_sampler");
  auto alphabet = spec.states();
  return {std::move(alphabet),
          [spec = std::move(spec)](std::span<const double> grid, std::uint64_t seed) {
            const auto times = integer_times(grid, "markov_sampler");
            const auto seq = sample_chain(spec, times.back() + 1, seed);
            SymbolPath out;
            out.times.assign(grid.begin(), grid.end());
            for (std::size_t k : times)
              out.symbols.push_back(seq[k]);
            return out;
          },
          "markov"};
}

MarkovChainSpec iid_chain(std::vector<std::string> alphabet, std::vector<double> probabilities) {
  if (alphabet.size() != probabilities.size())
    throw std::invalid_argument("iid process: one probability per outcome");
  const auto n = static_cast<Eigen::Index>(probabilities.size());
  const Eigen::Map<const Eigen::RowVectorXd> row(probabilities.data(), n);
  Eigen::MatrixXd p = row.replicate(n, 1);
  return MarkovChainSpec(std::move(alphabet), 1, std::move(p));
}

PathSampler iid_sampler(std::vector<std::string> alphabet, std::vector<double> probabilities) {
  auto s = markov_sampler(iid_chain(std::move(alphabet), std::move(probabilities)));
  s.description = "iid";
  return s;
}

PathSampler semi_markov_sampler(SemiMarkovSpec spec) {
  auto alphabet = spec.alphabet();
  return {std::move(alphabet),
          [spec = std::move(spec)](std::span<const double> grid, std::uint64_t seed) {
            require_sorted_grid(grid);
            if (grid.front() < 0.0)
              throw std::invalid_argument("semi_markov_sampler: grid times must be >= 0");
            Rng rng(seed);
            const auto path = sample_semi_markov(spec, std::max(grid.back(), spec.min_holding()), rng);
            return read_path(path, 0.0, grid);
          },
          "semi-markov"};
}

PathSampler semi_markov_sampler_from(SemiMarkovSpec spec, std::vector<Symbol> block,
                                     double first_jump) {
  auto alphabet = spec.alphabet();
  return {std::move(alphabet),
          [spec = std::move(spec), block = std::move(block),
           first_jump](std::span<const double> grid, std::uint64_t seed) {
            require_sorted_grid(grid);
            if (grid.front() < 0.0)
              throw std::invalid_argument("semi_markov_sampler: grid times must be >= 0");
            Rng rng(seed);
            const auto path = sample_semi_markov_from(
                spec, block, first_jump, std::max(grid.back(), spec.min_holding()), rng);
            return read_path(path, 0.0, grid);
          },
          "semi-markov (fixed start)"};
}

PathSampler shift_sampler(ShiftRepresentation rep) {
  auto alphabet = rep.alphabet();
  return {std::move(alphabet),
          [rep = std::move(rep)](std::span<const double> grid, std::uint64_t seed) {
            require_sorted_grid(grid);
            if (rep.discrete_time())
              integer_times(grid, "shift_sampler");
            Rng rng(seed);
            const auto r = rep.sample(rng, std::max(grid.back(), 0.0));
            SymbolPath out;
            out.times.assign(grid.begin(), grid.end());
            for (double t : grid)
              out.symbols.push_back(ShiftRepresentation::observe(ShiftRepresentation::shift(r, t)));
            return out;
          },
          "shift representation"};
}

PathSampler flow_rep_sampler(SemiMarkovFlowRep rep) {
  auto alphabet = rep.spec().alphabet();
  return {std::move(alphabet),
          [rep = std::move(rep)](std::span<const double> grid, std::uint64_t seed) {
            require_sorted_grid(grid);
            if (grid.front() < -rep.back() || grid.back() > rep.horizon())
              throw std::invalid_argument("flow_rep_sampler: grid leaves the sampled window");
            return trajectory_symbols(rep.system(), rep.delta(), grid, seed);
          },
          "flow representation"};
}

PathSampler remap_sampler(PathSampler inner, const SymbolMap &map) {
  std::vector<std::string> alphabet;
  std::vector<Symbol> translate;
  for (const auto &name : inner.alphabet) {
    const auto it = map.find(name);
    if (it == map.end())
      throw std::invalid_argument("outcome map: no image for '" + name + "'");
    auto pos = std::find(alphabet.begin(), alphabet.end(), it->second);
    if (pos == alphabet.end()) {
      alphabet.push_back(it->second);
      pos = alphabet.end() - 1;
    }
    translate.push_back(static_cast<Symbol>(pos - alphabet.begin()));
  }
  auto description = "mapped " + inner.description;
  return {std::move(alphabet),
          [inner = std::move(inner), translate](std::span<const double> grid, std::uint64_t seed) {
            auto path = inner.draw(grid, seed);
            for (auto &s : path.symbols)
              s = translate[s];
            return path;
          },
          std::move(description)};
}

} // namespace obsequiv
