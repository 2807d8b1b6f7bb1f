#ifndef OBSEQUIV_SEMI_MARKOV_HPP
#define OBSEQUIV_SEMI_MARKOV_HPP

#include "obsequiv/holding_time.hpp"
#include "obsequiv/markov.hpp"

#include <Eigen/Core>

#include <iosfwd>
#include <string>
#include <vector>

namespace obsequiv {

enum class HoldingPolicy {
  /// Distinct holding times must be pairwise irrationally related.
  require_irrational,
  /// Accept rationally related holding times (e.g. u = (1, 2)).
  allow_rational,
};

/// Semi-Markov (or n-step semi-Markov) process: an embedded stationary
/// Markov chain and an exact holding time per state.
class SemiMarkovSpec {
public:
  SemiMarkovSpec(MarkovChainSpec chain, std::vector<HoldingTime> holding,
                 HoldingPolicy policy = HoldingPolicy::require_irrational);

  const MarkovChainSpec &chain() const { return chain_; }
  const std::vector<std::string> &alphabet() const { return chain_.states(); }
  const std::vector<HoldingTime> &holding_times() const { return holding_; }
  /// u(s_i) in seconds.
  double holding(Symbol s) const { return values_[s]; }
  const std::vector<double> &holding_values() const { return values_; }
  double min_holding() const;
  double max_holding() const;
  HoldingPolicy policy() const { return policy_; }

  /// Time-weighted one-time marginal P(Z_t = s_i) = p_i u_i / sum_j p_j u_j.
  Eigen::VectorXd time_marginal() const;

private:
  MarkovChainSpec chain_;
  std::vector<HoldingTime> holding_;
  std::vector<double> values_;
  HoldingPolicy policy_;
};

/// Piecewise-constant realization: symbols[k] holds on [epochs[k], epochs[k+1]).
/// epochs[0] <= 0 < epochs[1] = T_0. Sojourns are stored exactly as drawn.
struct RealizationPath {
  std::vector<double> epochs;
  std::vector<Symbol> symbols;
  std::vector<double> sojourns;

  double first_jump() const { return epochs.at(1); }
  double start() const { return epochs.front(); }
  double end() const { return epochs.back(); }
  bool covers(double t) const { return t >= start() && t < end(); }
  /// Index of the sojourn containing t (right-continuous). Throws
  /// std::out_of_range outside [start, end).
  std::size_t index_at(double t) const;
  Symbol at(double t) const { return symbols[index_at(t)]; }
};

/// Symbol whose sojourn contains time 0.
Symbol observe_at_zero(const RealizationPath &r);

/// Stationary realization covering [0, horizon]. S_0 is drawn from the
/// time-weighted marginal (for order n, the history block ending in S_0 is
/// drawn with weight pi(block) u(S_0)); T_0 | S_0 is uniform on (0, u(S_0)].
RealizationPath sample_semi_markov(const SemiMarkovSpec &spec, double horizon,
                                   std::uint64_t seed);
RealizationPath sample_semi_markov(const SemiMarkovSpec &spec, double horizon, Rng &rng);

/// Realization from a fixed start: the history `block` (order symbols, last
/// one is S_0) and first jump T_0 in (0, u(S_0)]. Not stationary in general.
RealizationPath sample_semi_markov_from(const SemiMarkovSpec &spec, std::vector<Symbol> block,
                                        double first_jump, double horizon, Rng &rng);

/// CSV with columns epoch,symbol (one row per sojourn start).
void write_path_csv(std::ostream &out, const RealizationPath &path,
                    const std::vector<std::string> &alphabet);

} // namespace obsequiv

#endif // OBSEQUIV_SEMI_MARKOV_HPP
