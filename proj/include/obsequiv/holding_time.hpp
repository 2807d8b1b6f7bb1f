#ifndef OBSEQUIV_HOLDING_TIME_HPP
#define OBSEQUIV_HOLDING_TIME_HPP

#include <cstdint>
#include <span>
#include <string>
#include <string_view>

namespace obsequiv {

/// Holding time given exactly as (num/den) * sqrt(radicand) seconds, with
/// the radicand square-free and the fraction reduced. The exact form makes
/// irrational relatedness decidable; value() is only a view.
class HoldingTime {
public:
  HoldingTime(std::int64_t num, std::int64_t den = 1, std::uint64_t radicand = 1);

  /// Parses "3", "3/2", "sqrt(2)", "2*sqrt(3)", "3/4*sqrt(8)" (whitespace
  /// allowed). Decimal literals are rejected: they carry no certificate.
  static HoldingTime parse(std::string_view text);

  std::int64_t numerator() const { return num_; }
  std::int64_t denominator() const { return den_; }
  std::uint64_t radicand() const { return radicand_; }
  double value() const;
  std::string to_string() const;

  friend bool operator==(const HoldingTime &, const HoldingTime &) = default;

private:
  std::int64_t num_;
  std::int64_t den_;
  std::uint64_t radicand_;
};

/// a/b is irrational.
bool irrationally_related(const HoldingTime &a, const HoldingTime &b);

/// Every pair of distinct values in `values` is irrationally related.
bool irrationally_related(std::span<const HoldingTime> values);

} // namespace obsequiv

#endif // OBSEQUIV_HOLDING_TIME_HPP
