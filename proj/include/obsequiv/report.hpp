#ifndef OBSEQUIV_REPORT_HPP
#define OBSEQUIV_REPORT_HPP

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace obsequiv {

enum class Verdict { pass, fail, inconclusive };

const char *to_string(Verdict v);

/// One tested entry of a check: an event tuple, a state cell, a lag, ...
/// `status` is the entry's own verdict; informational entries use `pass`.
struct CheckItem {
  std::string label;
  Verdict status = Verdict::pass;
  double estimate = 0.0;
  double reference = 0.0;
  double std_error = 0.0;
  /// The bound the statistic was compared against (e.g. z * combined sigma).
  double tolerance = 0.0;
  std::uint64_t count = 0;
  std::uint64_t total = 0;
  /// Re-evaluable description of what witnessed the verdict.
  std::string witness;
};

/// Outcome of a checker. A fail verdict always carries at least one failing
/// item; inconclusive is reserved for unobserved conditioning events.
struct CheckReport {
  std::string check;
  Verdict verdict = Verdict::pass;
  std::vector<CheckItem> items;
  std::vector<std::uint64_t> seeds;
  std::uint64_t samples = 0;
  std::map<std::string, double> tolerances;
  std::vector<std::string> notes;

  bool passed() const { return verdict == Verdict::pass; }
  /// Recomputes the verdict from items: any fail -> fail, else any
  /// inconclusive -> inconclusive, else pass.
  void settle();
  const CheckItem *first_failure() const;
};

/// Combines sub-reports into one: items are prefixed with `sub.check`.
CheckReport combine(std::string check, const std::vector<CheckReport> &parts);

} // namespace obsequiv

#endif // OBSEQUIV_REPORT_HPP
