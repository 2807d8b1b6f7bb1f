#include "obsequiv/entropy.hpp"
#include "obsequiv/random.hpp"

#include <doctest.h>

#include <cmath>
#include <map>
#include <sstream>

using namespace obsequiv;

namespace {

// Brute-force Miller-Madow block entropy over a std::map of blocks.
double oracle_entropy(const std::vector<std::vector<Symbol>> &seqs, std::size_t L) {
  std::map<std::vector<Symbol>, double> counts;
  double n = 0;
  for (const auto &s : seqs)
    for (std::size_t i = 0; i + L <= s.size(); ++i) {
      counts[std::vector<Symbol>(s.begin() + long(i), s.begin() + long(i + L))] += 1;
      n += 1;
    }
  double h = 0;
  for (const auto &[k, c] : counts)
    h -= c / n * std::log2(c / n);
  return h + double(counts.size() - 1) / (2 * n * std::log(2.0));
}

std::vector<std::vector<Symbol>> random_sequences(std::size_t count, std::size_t len, Symbol k,
                                                  std::uint64_t seed) {
  Rng rng(seed);
  std::vector<std::vector<Symbol>> out(count, std::vector<Symbol>(len));
  for (auto &s : out)
    for (auto &x : s)
      x = static_cast<Symbol>(rng() % k);
  return out;
}

} // namespace

TEST_CASE("block counts are overlapping windows") {
  BlockCounts c(2, 2);
  const std::vector<Symbol> s{0, 1, 0, 1};
  c.add(s);
  CHECK(c.blocks() == 3);
  CHECK(c.symbols() == 4);
  CHECK(c.table()[1] == 2); // 01
  CHECK(c.table()[2] == 1); // 10
  const std::vector<Symbol> shortseq{1};
  c.add(shortseq);
  CHECK(c.blocks() == 3);
  const std::vector<Symbol> bad{0, 2};
  CHECK_THROWS_AS(c.add(bad), std::invalid_argument);
}

TEST_CASE("merging equals counting together") {
  const auto seqs = random_sequences(2, 500, 3, 1);
  BlockCounts a(3, 3), b(3, 3), both(3, 3);
  a.add(seqs[0]);
  b.add(seqs[1]);
  both.add(seqs[0]);
  both.add(seqs[1]);
  a.merge(b);
  CHECK(a.table() == both.table());
  CHECK(a.blocks() == both.blocks());
  CHECK_THROWS_AS(a.merge(BlockCounts(3, 2)), std::invalid_argument);
}

TEST_CASE("entropy matches a brute-force oracle") {
  const auto seqs = random_sequences(4, 20000, 3, 2);
  for (std::size_t L : {1u, 2u, 4u}) {
    const auto e = block_entropy(seqs, L, 3);
    CHECK(e.entropy == doctest::Approx(oracle_entropy(seqs, L)).epsilon(1e-12));
    CHECK(e.plug_in <= e.entropy);
    CHECK(e.rate == doctest::Approx(e.entropy / double(L)));
  }
}

TEST_CASE("relabeling the alphabet gives bit-identical entropy") {
  const auto seqs = random_sequences(3, 10000, 4, 3);
  auto relabeled = seqs;
  for (auto &s : relabeled)
    for (auto &x : s)
      x = (x + 1) % 4;
  CHECK(block_entropy(seqs, 3, 4).entropy == block_entropy(relabeled, 3, 4).entropy);
}

TEST_CASE("results do not depend on the worker count") {
  const auto seqs = random_sequences(16, 20000, 2, 4);
  const auto a = entropy_rate(seqs, 8, 2, 0.05, 1);
  const auto b = entropy_rate(seqs, 8, 2, 0.05, 4);
  for (std::size_t i = 0; i < a.estimates.size(); ++i)
    CHECK(a.estimates[i].entropy == b.estimates[i].entropy);
}

TEST_CASE("undersampling guard") {
  CHECK(max_guarded_length(102400, 2) == 10);
  CHECK(max_guarded_length(102399, 2) == 9);
  CHECK(max_guarded_length(99, 2) == 0);
  const auto seqs = random_sequences(1, 1000, 2, 5);
  CHECK_NOTHROW(block_entropy(seqs, 3, 2));
  CHECK_THROWS_AS(block_entropy(seqs, 4, 2), std::invalid_argument);
  CHECK_THROWS_AS(entropy_rate(seqs, 0, 2), std::invalid_argument);
}

TEST_CASE("fair coin has unit rate and a periodic sequence vanishes") {
  const auto coin = random_sequences(10, 100000, 2, 6);
  const auto t = entropy_rate(coin, 10, 2);
  CHECK(t.last_increment == doctest::Approx(1.0).epsilon(0.01));
  CHECK(t.positive);
  CHECK(std::string(t.flag()) == "positive-rate");

  std::vector<std::vector<Symbol>> periodic(1, std::vector<Symbol>(200000));
  for (std::size_t i = 0; i < periodic[0].size(); ++i)
    periodic[0][i] = static_cast<Symbol>(i % 3 == 0);
  const auto p = entropy_rate(periodic, 8, 2);
  CHECK_FALSE(p.positive);
  CHECK(std::string(p.flag()) == "vanishing-rate");
  // log2(3) bits for every L >= 2: three phases.
  CHECK(p.estimates.back().plug_in == doctest::Approx(std::log2(3.0)).epsilon(1e-4));
  CHECK(p.estimates[0].increment == doctest::Approx(p.estimates[0].entropy));
}

TEST_CASE("entropy csv") {
  const auto coin = random_sequences(1, 1000, 2, 7);
  const auto t = entropy_rate(coin, 2, 2);
  std::ostringstream out;
  write_entropy_csv(out, t);
  const auto text = out.str();
  CHECK(text.rfind("L,H_L,increment\n", 0) == 0);
  CHECK(std::count(text.begin(), text.end(), '\n') == 3);
}
