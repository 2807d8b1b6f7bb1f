#ifndef OBSEQUIV_ENTROPY_HPP
#define OBSEQUIV_ENTROPY_HPP

#include "obsequiv/partition.hpp"

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace obsequiv {

/// Overlapping L-block counts of symbol sequences over an alphabet of size
/// K, in a dense table of K^L cells. Merging is associative and commutative.
class BlockCounts {
public:
  BlockCounts(std::size_t alphabet_size, std::size_t length);

  void add(std::span<const Symbol> sequence);
  void merge(const BlockCounts &other);

  std::size_t alphabet_size() const { return alphabet_; }
  std::size_t length() const { return length_; }
  std::uint64_t blocks() const { return blocks_; }
  std::uint64_t symbols() const { return symbols_; }
  const std::vector<std::uint64_t> &table() const { return table_; }

private:
  std::size_t alphabet_;
  std::size_t length_;
  std::vector<std::uint64_t> table_;
  std::uint64_t blocks_ = 0;
  std::uint64_t symbols_ = 0;
};

struct EntropyEstimate {
  std::size_t length = 0;
  /// Miller-Madow corrected block entropy H_L in bits.
  double entropy = 0.0;
  /// Uncorrected plug-in value.
  double plug_in = 0.0;
  /// H_L / L.
  double rate = 0.0;
  /// H_L - H_{L-1} (H_0 = 0).
  double increment = 0.0;
  std::uint64_t blocks = 0;
  std::uint64_t symbols = 0;
  std::size_t distinct = 0;
};

/// Entropy of a count table. Counts are summed in sorted order, so any
/// relabeling of the alphabet gives a bit-identical result.
EntropyEstimate entropy_of(const BlockCounts &counts);

/// Block entropy H_L. Throws std::invalid_argument unless the sequences hold
/// at least 100 * K^L symbols.
EntropyEstimate block_entropy(std::span<const std::vector<Symbol>> sequences, std::size_t length,
                              std::size_t alphabet_size, unsigned jobs = 1);

struct EntropyTrend {
  std::vector<EntropyEstimate> estimates;
  double threshold = 0.05;
  double last_increment = 0.0;
  bool positive = false;

  const char *flag() const { return positive ? "positive-rate" : "vanishing-rate"; }
};

/// H_L for L = 1..max_length and the increments. Flags positive-rate iff the
/// last increment H_{L_max} - H_{L_max - 1} exceeds `threshold` bits.
EntropyTrend entropy_rate(std::span<const std::vector<Symbol>> sequences, std::size_t max_length,
                          std::size_t alphabet_size, double threshold = 0.05, unsigned jobs = 1);

/// Largest L for which the undersampling guard holds (0 if none).
std::size_t max_guarded_length(std::uint64_t symbols, std::size_t alphabet_size);

/// CSV with columns L,H_L,increment.
void write_entropy_csv(std::ostream &out, const EntropyTrend &trend);

} // namespace obsequiv

#endif // OBSEQUIV_ENTROPY_HPP
