#ifndef OBSEQUIV_MARKOV_HPP
#define OBSEQUIV_MARKOV_HPP

#include "obsequiv/partition.hpp"
#include "obsequiv/random.hpp"
#include "obsequiv/report.hpp"
#include "obsequiv/stats.hpp"

#include <Eigen/Core>

#include <span>
#include <string>
#include <vector>

namespace obsequiv {

/// Result of validating a (possibly order-n) transition table.
/// Blocks are histories (s_{t-n+1}, ..., s_t) coded in mixed radix, oldest
/// symbol most significant.
struct ChainDiagnostics {
  bool irreducible = false;
  bool aperiodic = false;
  std::size_t period = 0;
  bool valid = false;
  std::string reason;
  /// Codes of the blocks in the unique closed class, ascending.
  std::vector<std::size_t> recurrent_blocks;
  /// Stationary distribution over `recurrent_blocks`.
  Eigen::VectorXd stationary;
  /// One-time marginal p_{s_i}.
  Eigen::VectorXd state_marginal;
  /// max |pi P - pi| of the stationary solve.
  double residual = 0.0;
};

/// Validates a row-stochastic table of shape N^order x N. Throws
/// std::invalid_argument when rows do not sum to one (1e-12) or the shape
/// is wrong; reducible or periodic chains are reported, not thrown.
ChainDiagnostics validate_markov_spec(std::size_t states, int order,
                                      const Eigen::MatrixXd &transitions);

/// Stationary order-n Markov chain over named states.
class MarkovChainSpec {
public:
  MarkovChainSpec(std::vector<std::string> states, int order, Eigen::MatrixXd transitions);
  /// Order-1 chain.
  MarkovChainSpec(std::vector<std::string> states, Eigen::MatrixXd transitions);

  const std::vector<std::string> &states() const { return states_; }
  std::size_t size() const { return states_.size(); }
  int order() const { return order_; }
  const Eigen::MatrixXd &transitions() const { return transitions_; }
  const ChainDiagnostics &diagnostics() const { return diagnostics_; }
  bool valid() const { return diagnostics_.valid; }

  /// Number of history blocks, N^order.
  std::size_t block_count() const;
  /// Block code after appending `next` to the history `block`.
  std::size_t successor(std::size_t block, Symbol next) const;
  /// Symbols of a block, oldest first.
  std::vector<Symbol> block_symbols(std::size_t block) const;
  std::size_t block_code(std::span<const Symbol> symbols) const;
  Symbol last_symbol(std::size_t block) const { return static_cast<Symbol>(block % size()); }
  Symbol first_symbol(std::size_t block) const;

  /// Throws std::invalid_argument with the diagnostic reason when invalid.
  void require_valid(const char *what) const;

private:
  std::vector<std::string> states_;
  int order_;
  Eigen::MatrixXd transitions_;
  ChainDiagnostics diagnostics_;
  std::vector<std::vector<double>> cumulative_;

  friend std::vector<Symbol> sample_chain(const MarkovChainSpec &, std::size_t, Rng &);
  friend std::vector<Symbol> continue_chain(const MarkovChainSpec &, std::size_t,
                                            std::vector<Symbol>, Rng &);
};

/// Stationary sample path: the first `order` symbols are a block drawn from
/// the stationary block distribution, the rest follow the conditional law.
std::vector<Symbol> sample_chain(const MarkovChainSpec &spec, std::size_t length,
                                 std::uint64_t seed);
std::vector<Symbol> sample_chain(const MarkovChainSpec &spec, std::size_t length, Rng &rng);

/// Extends `prefix` (at least `order` symbols) to `length` symbols.
std::vector<Symbol> continue_chain(const MarkovChainSpec &spec, std::size_t length,
                                   std::vector<Symbol> prefix, Rng &rng);

/// Order-1 sampling from an arbitrary row-stochastic matrix and initial law,
/// without any irreducibility requirement (used for counterexample fixtures).
std::vector<Symbol> sample_chain_from(const Eigen::MatrixXd &transitions,
                                      const Eigen::VectorXd &initial, std::size_t length,
                                      Rng &rng);

/// Order-1 chain over the reachable n-blocks of an order-n chain; block
/// names join state names with '.'. Identity for order 1.
MarkovChainSpec block_embedding(const MarkovChainSpec &spec);

/// Maps a symbol sequence of `spec` to the sequence of (forward) n-blocks
/// expressed as states of block_embedding(spec).
std::vector<Symbol> to_block_sequence(const MarkovChainSpec &spec,
                                      std::span<const Symbol> sequence);

/// Tests the order-`order` Markov property on observed sequences: for every
/// context of `order` symbols, the next-symbol frequencies must not depend
/// on the symbol one step further back. Two-sample Wald comparisons with
/// Bonferroni over all compared entries.
CheckReport check_markov_property(std::span<const std::vector<Symbol>> sequences,
                                  std::size_t alphabet, int order,
                                  const TolerancePolicy &policy = {});

} // namespace obsequiv

#endif // OBSEQUIV_MARKOV_HPP
