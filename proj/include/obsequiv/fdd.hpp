#ifndef OBSEQUIV_FDD_HPP
#define OBSEQUIV_FDD_HPP

#include "obsequiv/partition.hpp"
#include "obsequiv/report.hpp"
#include "obsequiv/stats.hpp"

#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace obsequiv {

/// Observed outcomes of one trajectory at the listed times (seconds, ascending).
struct SymbolPath {
  std::vector<double> times;
  std::vector<Symbol> symbols;

  /// Index of `t` in `times` (within 1e-9), or times.size() if absent.
  std::size_t find(double t) const;
};

/// Event tuple: one outcome per grid time (a cylinder event with singleton
/// constraints).
using Event = std::vector<Symbol>;

/// Empirical finite-dimensional distribution over a fixed time grid. The full
/// joint histogram is kept, so every marginal is available and sums to one.
class EmpiricalFDD {
public:
  EmpiricalFDD(std::vector<double> grid, std::vector<std::string> alphabet,
               std::vector<Event> events = {});

  const std::vector<double> &grid() const { return grid_; }
  const std::vector<std::string> &alphabet() const { return alphabet_; }
  const std::vector<Event> &events() const { return events_; }
  std::uint64_t samples() const { return samples_; }

  /// Records the outcomes of `path` at the grid times. Throws if the path does
  /// not cover every grid time.
  void add(const SymbolPath &path);
  /// Adds another table over the same grid/alphabet/events.
  void merge(const EmpiricalFDD &other);

  std::uint64_t count(std::size_t event) const;
  double probability(std::size_t event) const;
  double std_error(std::size_t event) const;
  /// Distribution of Z at grid()[time_index].
  std::vector<double> marginal(std::size_t time_index) const;
  std::string describe(std::size_t event) const;

private:
  std::size_t code(const Event &e) const;

  std::vector<double> grid_;
  std::vector<std::string> alphabet_;
  std::vector<Event> events_;
  std::vector<std::size_t> event_codes_;
  std::vector<std::uint64_t> joint_;
  std::uint64_t samples_ = 0;
};

/// All |alphabet|^grid_size event tuples in lexicographic order.
std::vector<Event> all_events(std::size_t alphabet_size, std::size_t grid_size);

EmpiricalFDD estimate_fdd(std::span<const SymbolPath> paths, std::vector<std::string> alphabet,
                          std::vector<double> grid, std::vector<Event> events = {});

/// Entry-wise comparison |p_a - p_b| <= z * sqrt(se_a^2 + se_b^2), z from the
/// policy. Passes iff every entry passes.
CheckReport compare_fdd(const EmpiricalFDD &a, const EmpiricalFDD &b,
                        const TolerancePolicy &policy = {});

/// Point estimate with a Wald interval of half-width sigma * stderr.
struct ProbEstimate {
  double estimate = 0.0;
  double half_width = 0.0;
  std::uint64_t numerator = 0;
  std::uint64_t denominator = 0;

  double lower() const;
  double upper() const;
  /// Interval excludes both 0 and 1.
  bool strictly_inside_unit() const { return lower() > 0.0 && upper() < 1.0; }
};

/// Thrown when the conditioning event of a conditional estimate never occurs.
class UnobservedCondition : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

enum class AnchorMode {
  /// Every time t of a path with t + lag also on the path (needs stationarity).
  pooled,
  /// Only the first time of each path.
  first,
};

/// Estimate of P{Z_{t+lag} = to | Z_t = from}.
ProbEstimate conditional_estimate(std::span<const SymbolPath> paths, double lag, Symbol from,
                                  Symbol to, AnchorMode mode = AnchorMode::pooled,
                                  double sigma = 3.0);

} // namespace obsequiv

#endif // OBSEQUIV_FDD_HPP
