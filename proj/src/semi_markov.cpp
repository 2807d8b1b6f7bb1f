#include "obsequiv/semi_markov.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace obsequiv {

SemiMarkovSpec::SemiMarkovSpec(MarkovChainSpec chain, std::vector<HoldingTime> holding,
                               HoldingPolicy policy)
    : chain_(std::move(chain)), holding_(std::move(holding)), policy_(policy) {
  chain_.require_valid("semi-Markov spec");
  if (holding_.size() != chain_.size())
    throw std::invalid_argument("semi-Markov spec: need one holding time per state");
  if (policy_ == HoldingPolicy::require_irrational && !irrationally_related(holding_))
    throw std::invalid_argument(
        "semi-Markov spec: holding times are not pairwise irrationally related");
  values_.reserve(holding_.size());
  for (const auto &h : holding_)
    values_.push_back(h.value());
}

double SemiMarkovSpec::min_holding() const {
  return *std::min_element(values_.begin(), values_.end());
}

double SemiMarkovSpec::max_holding() const {
  return *std::max_element(values_.begin(), values_.end());
}

Eigen::VectorXd SemiMarkovSpec::time_marginal() const {
  const Eigen::Map<const Eigen::VectorXd> u(values_.data(), static_cast<Eigen::Index>(values_.size()));
  Eigen::VectorXd w = chain_.diagnostics().state_marginal.cwiseProduct(u);
  return w / w.sum();
}

std::size_t RealizationPath::index_at(double t) const {
  if (symbols.empty() || !covers(t))
    throw std::out_of_range("realization does not cover t = " + std::to_string(t));
  const auto it = std::upper_bound(epochs.begin(), epochs.end(), t);
  return static_cast<std::size_t>(it - epochs.begin()) - 1;
}

Symbol observe_at_zero(const RealizationPath &r) { return r.at(0.0); }

RealizationPath sample_semi_markov_from(const SemiMarkovSpec &spec, std::vector<Symbol> block,
                                        double first_jump, double horizon, Rng &rng) {
  if (!(horizon > 0.0) || !std::isfinite(horizon))
    throw std::invalid_argument("sample_semi_markov: horizon must be positive");
  const auto &chain = spec.chain();
  const auto n = static_cast<std::size_t>(chain.order());
  if (block.size() != n)
    throw std::invalid_argument("sample_semi_markov: start block must have `order` symbols");
  const Symbol s0 = block.back();
  if (!(first_jump > 0.0) || first_jump > spec.holding(s0))
    throw std::invalid_argument("sample_semi_markov: T_0 must lie in (0, u(S_0)]");

  // Enough symbols to pass the horizon; extended below if rounding needs it.
  const auto need = static_cast<std::size_t>(std::ceil(horizon / spec.min_holding())) + 2;
  auto seq = continue_chain(chain, n - 1 + need, std::move(block), rng);

  RealizationPath path;
  path.epochs.reserve(need + 1);
  path.epochs.push_back(first_jump - spec.holding(s0));
  std::size_t k = n - 1;
  for (;;) {
    if (k >= seq.size())
      seq = continue_chain(chain, seq.size() + need, std::move(seq), rng);
    const Symbol s = seq[k++];
    const double u = spec.holding(s);
    path.symbols.push_back(s);
    path.sojourns.push_back(u);
    path.epochs.push_back(path.epochs.size() == 1 ? first_jump : path.epochs.back() + u);
    if (path.epochs.back() > horizon)
      break;
  }
  return path;
}

RealizationPath sample_semi_markov(const SemiMarkovSpec &spec, double horizon, Rng &rng) {
  const auto &chain = spec.chain();
  const auto &d = chain.diagnostics();
  std::vector<double> cum(d.recurrent_blocks.size());
  double acc = 0.0;
  for (std::size_t i = 0; i < cum.size(); ++i) {
    acc += d.stationary(static_cast<Eigen::Index>(i)) *
           spec.holding(chain.last_symbol(d.recurrent_blocks[i]));
    cum[i] = acc;
  }
  const std::size_t block = d.recurrent_blocks[draw_index(rng, cum)];
  const double u = spec.holding(chain.last_symbol(block));
  // 1 - U lies in (0, 1], so T_0 lies in (0, u].
  const double t0 = u * (1.0 - uniform01(rng));
  return sample_semi_markov_from(spec, chain.block_symbols(block), t0, horizon, rng);
}

RealizationPath sample_semi_markov(const SemiMarkovSpec &spec, double horizon,
                                   std::uint64_t seed) {
  Rng rng(seed);
  return sample_semi_markov(spec, horizon, rng);
}

void write_path_csv(std::ostream &out, const RealizationPath &path,
                    const std::vector<std::string> &alphabet) {
  std::ostringstream line;
  line.precision(17);
  out << "epoch,symbol\n";
  for (std::size_t k = 0; k < path.symbols.size(); ++k) {
    line.str("");
    line << path.epochs[k] << ',' << alphabet.at(path.symbols[k]) << '\n';
    out << line.str();
  }
}

} // namespace obsequiv
