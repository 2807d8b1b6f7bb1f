#include "obsequiv/entropy.hpp"

#include "obsequiv/random.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace obsequiv {

namespace {

constexpr std::size_t kMaxCells = std::size_t{1} << 26;

std::size_t cells_for(std::size_t k, std::size_t length) {
  std::size_t n = 1;
  for (std::size_t i = 0; i < length; ++i) {
    if (n > kMaxCells / std::max<std::size_t>(k, 1))
      throw std::invalid_argument("block entropy: K^L exceeds the dense table limit");
    n *= k;
  }
  return n;
}

std::uint64_t total_symbols(std::span<const std::vector<Symbol>> sequences) {
  std::uint64_t n = 0;
  for (const auto &s : sequences)
    n += s.size();
  return n;
}

void require_guard(std::uint64_t symbols, std::size_t k, std::size_t length) {
  const double need = 100.0 * std::pow(double(k), double(length));
  if (double(symbols) < need)
    throw std::invalid_argument("block entropy: undersampled (L=" + std::to_string(length) +
                                " needs " + std::to_string(static_cast<std::uint64_t>(need)) +
                                " symbols, have " + std::to_string(symbols) + ")");
}

BlockCounts count_blocks(std::span<const std::vector<Symbol>> sequences, std::size_t length,
                         std::size_t k, unsigned jobs) {
  const std::size_t parts = std::max<unsigned>(1, std::min<std::size_t>(jobs, sequences.size()));
  std::vector<BlockCounts> partial(parts, BlockCounts(k, length));
  const std::size_t chunk = (sequences.size() + parts - 1) / parts;
  parallel_for(parts, static_cast<unsigned>(parts), [&](std::size_t p) {
    for (std::size_t i = p * chunk; i < std::min(sequences.size(), (p + 1) * chunk); ++i)
      partial[p].add(sequences[i]);
  });
  for (std::size_t p = 1; p < parts; ++p)
    partial[0].merge(partial[p]);
  return std::move(partial[0]);
}

} // namespace

BlockCounts::BlockCounts(std::size_t alphabet_size, std::size_t length)
    : alphabet_(alphabet_size), length_(length) {
  if (alphabet_size == 0 || length == 0)
    throw std::invalid_argument("block entropy: need K >= 1 and L >= 1");
  table_.assign(cells_for(alphabet_size, length), 0);
}

void BlockCounts::add(std::span<const Symbol> sequence) {
  symbols_ += sequence.size();
  if (sequence.size() < length_)
    return;
  const std::size_t top = table_.size() / alphabet_;
  std::size_t code = 0;
  for (std::size_t i = 0; i < sequence.size(); ++i) {
    if (sequence[i] >= alphabet_)
      throw std::invalid_argument("block entropy: symbol outside the alphabet");
    code = (i >= length_ ? code % top : code) * alphabet_ + sequence[i];
    if (i + 1 >= length_) {
      table_[code]++;
      ++blocks_;
    }
  }
}

void BlockCounts::merge(const BlockCounts &other) {
  if (other.alphabet_ != alphabet_ || other.length_ != length_)
    throw std::invalid_argument("block entropy: merging tables of different shape");
  for (std::size_t i = 0; i < table_.size(); ++i)
    table_[i] += other.table_[i];
  blocks_ += other.blocks_;
  symbols_ += other.symbols_;
}

EntropyEstimate entropy_of(const BlockCounts &counts) {
  EntropyEstimate e;
  e.length = counts.length();
  e.blocks = counts.blocks();
  e.symbols = counts.symbols();
  if (e.blocks == 0)
    throw std::invalid_argument("block entropy: no complete blocks");
  std::vector<std::uint64_t> nz;
  for (std::uint64_t c : counts.table())
    if (c)
      nz.push_back(c);
  std::sort(nz.begin(), nz.end());
  const double n = double(e.blocks);
  double h = 0.0;
  for (std::uint64_t c : nz) {
    const double p = double(c) / n;
    h -= p * std::log2(p);
  }
  e.distinct = nz.size();
  e.plug_in = std::max(0.0, h);
  e.entropy = e.plug_in + double(e.distinct - 1) / (2.0 * n * std::log(2.0));
  e.rate = e.entropy / double(e.length);
  e.increment = e.entropy;
  return e;
}

EntropyEstimate block_entropy(std::span<const std::vector<Symbol>> sequences, std::size_t length,
                              std::size_t alphabet_size, unsigned jobs) {
  require_guard(total_symbols(sequences), alphabet_size, length);
  return entropy_of(count_blocks(sequences, length, alphabet_size, jobs));
}

std::size_t max_guarded_length(std::uint64_t symbols, std::size_t alphabet_size) {
  std::size_t l = 0;
  double need = 100.0;
  while (double(symbols) >= need * double(alphabet_size) && l < 64) {
    need *= double(alphabet_size);
    ++l;
    if (alphabet_size <= 1)
      break;
  }
  return l;
}

EntropyTrend entropy_rate(std::span<const std::vector<Symbol>> sequences, std::size_t max_length,
                          std::size_t alphabet_size, double threshold, unsigned jobs) {
  if (max_length == 0)
    throw std::invalid_argument("entropy_rate: L_max must be >= 1");
  require_guard(total_symbols(sequences), alphabet_size, max_length);
  EntropyTrend trend;
  trend.threshold = threshold;
  double previous = 0.0;
  for (std::size_t l = 1; l <= max_length; ++l) {
    auto e = entropy_of(count_blocks(sequences, l, alphabet_size, jobs));
    e.increment = e.entropy - previous;
    previous = e.entropy;
    trend.estimates.push_back(e);
  }
  trend.last_increment = trend.estimates.back().increment;
  trend.positive = trend.last_increment > threshold;
  return trend;
}

void write_entropy_csv(std::ostream &out, const EntropyTrend &trend) {
  std::ostringstream s;
  s.precision(17);
  s << "L,H_L,increment\n";
  for (const auto &e : trend.estimates)
    s << e.length << ',' << e.entropy << ',' << e.increment << '\n';
  out << s.str();
}

} // namespace obsequiv
