#include "obsequiv/report.hpp"

#include <algorithm>

namespace obsequiv {

const char *to_string(Verdict v) {
  switch (v) {
  case Verdict::pass:
    return "pass";
  case Verdict::fail:
    return "fail";
  case Verdict::inconclusive:
    return "inconclusive";
  }
  return "unknown";
}

void CheckReport::settle() {
  const auto has = [&](Verdict v) {
    return std::any_of(items.begin(), items.end(),
                       [v](const CheckItem &i) { return i.status == v; });
  };
  if (has(Verdict::fail))
    verdict = Verdict::fail;
  else if (has(Verdict::inconclusive))
    verdict = Verdict::inconclusive;
  else
    verdict = Verdict::pass;
}

const CheckItem *CheckReport::first_failure() const {
  for (const CheckItem &i : items)
    if (i.status == Verdict::fail)
      return &i;
  return nullptr;
}

CheckReport combine(std::string check, const std::vector<CheckReport> &parts) {
  CheckReport out;
  out.check = std::move(check);
  for (const CheckReport &p : parts) {
    for (CheckItem item : p.items) {
      item.label = p.check + ": " + item.label;
      out.items.push_back(std::move(item));
    }
    out.seeds.insert(out.seeds.end(), p.seeds.begin(), p.seeds.end());
    out.samples = std::max(out.samples, p.samples);
    for (const auto &[k, v] : p.tolerances)
      out.tolerances[k] = v;
    out.notes.insert(out.notes.end(), p.notes.begin(), p.notes.end());
  }
  out.settle();
  return out;
}

} // namespace obsequiv
