#include "obsequiv/fdd.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

namespace obsequiv {

namespace {

constexpr double kTimeMatch = 1e-9;
constexpr std::size_t kMaxJointCells = std::size_t{1} << 22;

std::string format_time(double t) {
  std::ostringstream os;
  os << t;
  return os.str();
}

} // namespace

std::size_t SymbolPath::find(double t) const {
  const auto it = std::lower_bound(times.begin(), times.end(), t - kTimeMatch);
  if (it != times.end() && std::abs(*it - t) <= kTimeMatch)
    return static_cast<std::size_t>(it - times.begin());
  return times.size();
}

std::vector<Event> all_events(std::size_t alphabet_size, std::size_t grid_size) {
  std::size_t total = 1;
  for (std::size_t i = 0; i < grid_size; ++i) {
    total *= alphabet_size;
    if (total > kMaxJointCells)
      throw std::invalid_argument("all_events: too many event tuples");
  }
  std::vector<Event> out;
  out.reserve(total);
  for (std::size_t c = 0; c < total; ++c) {
    Event e(grid_size);
    std::size_t rest = c;
    for (std::size_t k = grid_size; k-- > 0;) {
      e[k] = static_cast<Symbol>(rest % alphabet_size);
      rest /= alphabet_size;
    }
    out.push_back(std::move(e));
  }
  return out;
}

EmpiricalFDD::EmpiricalFDD(std::vector<double> grid, std::vector<std::string> alphabet,
                           std::vector<Event> events)
    : grid_(std::move(grid)), alphabet_(std::move(alphabet)), events_(std::move(events)) {
  if (grid_.empty())
    throw std::invalid_argument("fdd: empty time grid");
  if (alphabet_.empty())
    throw std::invalid_argument("fdd: empty alphabet");
  std::size_t cells = 1;
  for (std::size_t i = 0; i < grid_.size(); ++i) {
    cells *= alphabet_.size();
    if (cells > kMaxJointCells)
      throw std::invalid_argument("fdd: joint table too large for this grid and alphabet");
  }
  joint_.assign(cells, 0);
  if (events_.empty())
    events_ = all_events(alphabet_.size(), grid_.size());
  event_codes_.reserve(events_.size());
  for (const Event &e : events_) {
    if (e.size() != grid_.size())
      throw std::invalid_argument("fdd: event arity does not match grid size");
    for (Symbol s : e)
      if (s >= alphabet_.size())
        throw std::invalid_argument("fdd: event symbol outside alphabet");
    event_codes_.push_back(code(e));
  }
}

std::size_t EmpiricalFDD::code(const Event &e) const {
  std::size_t c = 0;
  for (Symbol s : e)
    c = c * alphabet_.size() + s;
  return c;
}

void EmpiricalFDD::add(const SymbolPath &path) {
  std::size_t c = 0;
  for (double t : grid_) {
    const std::size_t i = path.find(t);
    if (i == path.times.size())
      throw std::invalid_argument("fdd: path does not cover grid time " + format_time(t));
    const Symbol s = path.symbols[i];
    if (s >= alphabet_.size())
      throw std::invalid_argument("fdd: path symbol outside alphabet");
    c = c * alphabet_.size() + s;
  }
  ++joint_[c];
  ++samples_;
}

void EmpiricalFDD::merge(const EmpiricalFDD &other) {
  if (other.grid_ != grid_ || other.alphabet_ != alphabet_ || other.events_ != events_)
    throw std::invalid_argument("fdd: cannot merge tables over different grids/events");
  for (std::size_t i = 0; i < joint_.size(); ++i)
    joint_[i] += other.joint_[i];
  samples_ += other.samples_;
}

std::uint64_t EmpiricalFDD::count(std::size_t event) const { return joint_[event_codes_.at(event)]; }

double EmpiricalFDD::probability(std::size_t event) const {
  if (samples_ == 0)
    throw std::logic_error("fdd: no samples recorded");
  return static_cast<double>(count(event)) / static_cast<double>(samples_);
}

double EmpiricalFDD::std_error(std::size_t event) const {
  return wald_stderr(probability(event), static_cast<double>(samples_));
}

std::vector<double> EmpiricalFDD::marginal(std::size_t time_index) const {
  if (time_index >= grid_.size())
    throw std::out_of_range("fdd: time index");
  if (samples_ == 0)
    throw std::logic_error("fdd: no samples recorded");
  const std::size_t a = alphabet_.size();
  std::size_t stride = 1;
  for (std::size_t k = time_index + 1; k < grid_.size(); ++k)
    stride *= a;
  std::vector<std::uint64_t> counts(a, 0);
  for (std::size_t c = 0; c < joint_.size(); ++c)
    counts[(c / stride) % a] += joint_[c];
  std::vector<double> p(a);
  for (std::size_t s = 0; s < a; ++s)
    p[s] = static_cast<double>(counts[s]) / static_cast<double>(samples_);
  return p;
}

std::string EmpiricalFDD::describe(std::size_t event) const {
  std::ostringstream os;
  os << "P(";
  const Event &e = events_.at(event);
  for (std::size_t k = 0; k < e.size(); ++k)
    os << (k ? ", " : "") << "Z[" << grid_[k] << "]=" << alphabet_[e[k]];
  os << ")";
  return os.str();
}

EmpiricalFDD estimate_fdd(std::span<const SymbolPath> paths, std::vector<std::string> alphabet,
                          std::vector<double> grid, std::vector<Event> events) {
  if (paths.empty())
    throw std::invalid_argument("estimate_fdd: no paths");
  EmpiricalFDD fdd(std::move(grid), std::move(alphabet), std::move(events));
  for (const SymbolPath &p : paths)
    fdd.add(p);
  return fdd;
}

CheckReport compare_fdd(const EmpiricalFDD &a, const EmpiricalFDD &b,
                        const TolerancePolicy &policy) {
  if (a.grid() != b.grid())
    throw std::invalid_argument("compare_fdd: tables are over different time grids");
  if (a.alphabet() != b.alphabet() || a.events() != b.events())
    throw std::invalid_argument("compare_fdd: tables are over different event sets");
  CheckReport report;
  report.check = "fdd";
  report.samples = std::min(a.samples(), b.samples());
  const std::size_t m = a.events().size();
  const double z = critical_z(policy, m);
  report.tolerances = {{"sigma", policy.sigma},
                       {"z", z},
                       {"family", static_cast<double>(policy.family_size ? policy.family_size : m)}};
  double max_delta = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    CheckItem item;
    item.label = a.describe(i);
    item.estimate = a.probability(i);
    item.reference = b.probability(i);
    item.std_error = std::hypot(a.std_error(i), b.std_error(i));
    item.tolerance = z * item.std_error;
    item.count = a.count(i);
    item.total = a.samples();
    const double delta = std::abs(item.estimate - item.reference);
    max_delta = std::max(max_delta, delta);
    item.status = delta <= item.tolerance ? Verdict::pass : Verdict::fail;
    if (item.status == Verdict::fail)
      item.witness = item.label + ": |" + std::to_string(item.estimate) + " - " +
                     std::to_string(item.reference) + "| > " + std::to_string(item.tolerance);
    report.items.push_back(std::move(item));
  }
  report.tolerances["max_delta"] = max_delta;
  report.settle();
  return report;
}

double ProbEstimate::lower() const { return std::max(0.0, estimate - half_width); }
double ProbEstimate::upper() const { return std::min(1.0, estimate + half_width); }

ProbEstimate conditional_estimate(std::span<const SymbolPath> paths, double lag, Symbol from,
                                  Symbol to, AnchorMode mode, double sigma) {
  if (lag < 0.0)
    throw std::invalid_argument("conditional_estimate: negative lag");
  ProbEstimate r;
  for (const SymbolPath &p : paths) {
    const std::size_t anchors = mode == AnchorMode::first ? std::min<std::size_t>(1, p.times.size())
                                                          : p.times.size();
    for (std::size_t i = 0; i < anchors; ++i) {
      const std::size_t j = p.find(p.times[i] + lag);
      if (j == p.times.size())
        continue;
      if (p.symbols[i] != from)
        continue;
      ++r.denominator;
      if (p.symbols[j] == to)
        ++r.numerator;
    }
  }
  if (r.denominator == 0)
    throw UnobservedCondition("conditional_estimate: conditioning outcome never observed");
  const double n = static_cast<double>(r.denominator);
  r.estimate = static_cast<double>(r.numerator) / n;
  r.half_width = sigma * wald_stderr(r.estimate, n);
  return r;
}

} // namespace obsequiv
