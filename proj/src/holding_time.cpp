#include "obsequiv/holding_time.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace obsequiv {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front())))
    s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back())))
    s.remove_suffix(1);
  return s;
}

std::int64_t parse_integer(std::string_view s, std::string_view whole) {
  s = trim(s);
  std::int64_t v = 0;
  const auto [end, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || ec != std::errc{} || end != s.data() + s.size())
    throw std::invalid_argument("holding time '" + std::string(whole) +
                                "': expected an integer, fraction or q*sqrt(n)");
  return v;
}

} // namespace

HoldingTime::HoldingTime(std::int64_t num, std::int64_t den, std::uint64_t radicand)
    : num_(num), den_(den), radicand_(radicand) {
  if (den_ == 0)
    throw std::invalid_argument("holding time: zero denominator");
  if (radicand_ == 0 || num_ == 0)
    throw std::invalid_argument("holding time: must be positive");
  if (den_ < 0) {
    num_ = -num_;
    den_ = -den_;
  }
  if (num_ < 0)
    throw std::invalid_argument("holding time: must be positive");
  // Pull square factors out of the radicand.
  for (std::uint64_t f = 2; f * f <= radicand_; ++f)
    while (radicand_ % (f * f) == 0) {
      radicand_ /= f * f;
      num_ *= static_cast<std::int64_t>(f);
    }
  const std::int64_t g = std::gcd(num_, den_);
  num_ /= g;
  den_ /= g;
}

HoldingTime HoldingTime::parse(std::string_view text) {
  const std::string_view s = trim(text);
  if (s.find('.') != std::string_view::npos || s.find('e') != std::string_view::npos ||
      s.find('E') != std::string_view::npos)
    throw std::invalid_argument("holding time '" + std::string(text) +
                                "': bare decimals are not accepted; use q or q*sqrt(n)");
  std::string_view rational = s;
  std::uint64_t radicand = 1;
  if (const auto at = s.find("sqrt("); at != std::string_view::npos) {
    const auto close = s.find(')', at);
    if (close == std::string_view::npos || trim(s.substr(close + 1)).size() != 0)
      throw std::invalid_argument("holding time '" + std::string(text) + "': malformed sqrt(...)");
    const std::int64_t r = parse_integer(s.substr(at + 5, close - at - 5), text);
    if (r <= 0)
      throw std::invalid_argument("holding time '" + std::string(text) + "': radicand must be positive");
    radicand = static_cast<std::uint64_t>(r);
    rational = trim(s.substr(0, at));
    if (rational.empty())
      rational = "1";
    else if (rational.back() == '*')
      rational = trim(rational.substr(0, rational.size() - 1));
    else
      throw std::invalid_argument("holding time '" + std::string(text) + "': expected q*sqrt(n)");
  }
  std::int64_t num = 0, den = 1;
  if (const auto slash = rational.find('/'); slash != std::string_view::npos) {
    num = parse_integer(rational.substr(0, slash), text);
    den = parse_integer(rational.substr(slash + 1), text);
  } else {
    num = parse_integer(rational, text);
  }
  return HoldingTime(num, den, radicand);
}

double HoldingTime::value() const {
  return static_cast<double>(num_) / static_cast<double>(den_) *
         std::sqrt(static_cast<double>(radicand_));
}

std::string HoldingTime::to_string() const {
  std::string out = std::to_string(num_);
  if (den_ != 1)
    out += "/" + std::to_string(den_);
  if (radicand_ != 1)
    out += "*sqrt(" + std::to_string(radicand_) + ")";
  return out;
}

bool irrationally_related(const HoldingTime &a, const HoldingTime &b) {
  // (p sqrt(r)) / (q sqrt(s)) with square-free r, s is rational iff r == s.
  return a.radicand() != b.radicand();
}

bool irrationally_related(std::span<const HoldingTime> values) {
  for (std::size_t i = 0; i < values.size(); ++i)
    for (std::size_t j = i + 1; j < values.size(); ++j)
      if (values[i] != values[j] && !irrationally_related(values[i], values[j]))
        return false;
  return true;
}

} // namespace obsequiv
