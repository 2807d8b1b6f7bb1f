#include "obsequiv/stats.hpp"

#include <boost/math/distributions/chi_squared.hpp>
#include <boost/math/distributions/normal.hpp>

#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <vector>

namespace obsequiv {

double critical_z(double sigma, std::size_t family) {
  if (family <= 1)
    return sigma;
  const boost::math::normal standard;
  const double alpha = std::erfc(sigma / std::sqrt(2.0));
  return boost::math::quantile(boost::math::complement(standard, alpha / (2.0 * family)));
}

double critical_z(const TolerancePolicy &policy, std::size_t entries) {
  if (!policy.bonferroni)
    return policy.sigma;
  return critical_z(policy.sigma, policy.family_size ? policy.family_size : entries);
}

double wald_stderr(double p, double n) {
  if (!(n > 0.0))
    throw std::invalid_argument("wald_stderr: nonpositive sample size");
  return std::sqrt(std::max(0.0, p * (1.0 - p)) / n);
}

ChiSquareResult chi_square(std::span<const std::uint64_t> observed,
                           std::span<const double> expected) {
  if (observed.size() != expected.size() || observed.size() < 2)
    throw std::invalid_argument("chi_square: need matching tables with at least two bins");
  const double n = static_cast<double>(
      std::accumulate(observed.begin(), observed.end(), std::uint64_t{0}));
  const double mass = std::accumulate(expected.begin(), expected.end(), 0.0);
  if (!(n > 0.0) || !(mass > 0.0))
    throw std::invalid_argument("chi_square: empty table");
  ChiSquareResult r;
  int bins = 0;
  for (std::size_t i = 0; i < observed.size(); ++i) {
    const double e = n * expected[i] / mass;
    if (e <= 0.0) {
      if (observed[i] > 0)
        return {std::numeric_limits<double>::infinity(), 1, 0.0};
      continue;
    }
    const double d = static_cast<double>(observed[i]) - e;
    r.statistic += d * d / e;
    ++bins;
  }
  r.dof = bins - 1;
  if (r.dof < 1)
    return r;
  const boost::math::chi_squared dist(r.dof);
  r.p_value = boost::math::cdf(boost::math::complement(dist, r.statistic));
  return r;
}

ChiSquareResult chi_square_uniform(std::span<const std::uint64_t> observed) {
  const std::vector<double> expected(observed.size(), 1.0);
  return chi_square(observed, expected);
}

} // namespace obsequiv
