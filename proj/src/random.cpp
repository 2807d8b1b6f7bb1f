#include "obsequiv/random.hpp"

#include <algorithm>
#include <stdexcept>

namespace obsequiv {

std::uint64_t mix64(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream,
                          std::uint64_t index) noexcept {
  return mix64(mix64(master ^ mix64(stream)) + index);
}

std::size_t draw_index(Rng &rng, const std::vector<double> &cumulative) {
  if (cumulative.empty())
    throw std::invalid_argument("draw_index: empty distribution");
  const double u = uniform01(rng) * cumulative.back();
  const auto it = std::upper_bound(cumulative.begin(), cumulative.end(), u);
  if (it == cumulative.end())
    return cumulative.size() - 1;
  return static_cast<std::size_t>(it - cumulative.begin());
}

} // namespace obsequiv
