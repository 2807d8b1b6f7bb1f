#ifndef OBSEQUIV_STATS_HPP
#define OBSEQUIV_STATS_HPP

#include <cstddef>
#include <cstdint>
#include <span>

namespace obsequiv {

/// Tolerance policy for comparisons of estimated probabilities: a `sigma`
/// Wald interval per entry, widened by Bonferroni over the family of entries.
struct TolerancePolicy {
  double sigma = 3.0;
  bool bonferroni = true;
  /// Number of simultaneous comparisons; 0 means "the entries of this report".
  std::size_t family_size = 0;
};

/// Two-sided normal quantile matching `sigma` for a single comparison, and
/// its Bonferroni-corrected version for `family` comparisons.
double critical_z(double sigma, std::size_t family);
double critical_z(const TolerancePolicy &policy, std::size_t entries);

/// sqrt(p(1-p)/n).
double wald_stderr(double p, double n);

struct ChiSquareResult {
  double statistic = 0.0;
  int dof = 0;
  double p_value = 1.0;
};

/// Pearson chi-square of observed counts against expected probabilities.
ChiSquareResult chi_square(std::span<const std::uint64_t> observed,
                           std::span<const double> expected);

/// Pearson chi-square against the uniform distribution over the bins.
ChiSquareResult chi_square_uniform(std::span<const std::uint64_t> observed);

} // namespace obsequiv

#endif // OBSEQUIV_STATS_HPP
