#ifndef OBSEQUIV_EQUIVALENCE_HPP
#define OBSEQUIV_EQUIVALENCE_HPP

#include "obsequiv/fdd.hpp"
#include "obsequiv/partition.hpp"
#include "obsequiv/report.hpp"
#include "obsequiv/sampler.hpp"
#include "obsequiv/stats.hpp"
#include "obsequiv/system.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace obsequiv {

using Grid = std::vector<double>;

/// Outcome sets coincide, then compare_fdd on every grid. Bonferroni runs
/// over all entries of all grids. Side A uses stream 1, side B stream 2.
CheckReport check_observational_equivalence(const PathSampler &a, const PathSampler &b,
                                            const std::vector<Grid> &grids,
                                            const Ensemble &ensemble,
                                            const TolerancePolicy &policy = {});

/// For each lag k: some (o_i, o_j) with a 3-sigma interval for
/// P{Z_k = o_j | Z_0 = o_i} strictly inside (0,1). Anchored at t = 0 only.
/// Inconclusive for a lag when no conditioning outcome was observed.
CheckReport check_nontriviality(const PathSampler &sampler, const std::vector<double> &lags,
                                const Ensemble &ensemble, double sigma = 3.0);

template <System S>
CheckReport check_nontriviality(const S &system, const ObservationFunction &obs,
                                const std::vector<double> &lags, const Ensemble &ensemble,
                                double sigma = 3.0) {
  if (!obs.nontrivial())
    throw std::invalid_argument("check_nontriviality: observation is trivial");
  return check_nontriviality(system_sampler(system, obs), lags, ensemble, sigma);
}

/// compare_fdd between `grid` and `grid + h` for every shift h, with
/// independent ensembles (h = 0 reuses the unshifted ensemble).
CheckReport check_stationarity(const PathSampler &sampler, const Grid &grid,
                               const std::vector<double> &shifts, const Ensemble &ensemble,
                               const TolerancePolicy &policy = {});

/// A set with its known measure mu(A). A negative `measure` means "ask the
/// phase space".
struct MeasureTest {
  std::string label;
  Region set;
  double measure = -1.0;
};

/// Fraction of m ~ mu with T_t(m) in A against mu(A), Wald sigma from the
/// known mu(A), Bonferroni over all (A, t).
template <System S>
CheckReport check_measure_preservation(const S &system, const std::vector<MeasureTest> &tests,
                                       const std::vector<double> &times, const Ensemble &ens,
                                       const TolerancePolicy &policy = {}) {
  if (tests.empty() || times.empty())
    throw std::invalid_argument("check_measure_preservation: need test sets and times");
  const std::size_t nt = times.size();
  // hits[i * tests + a]: trajectory i, time index, set a.
  std::vector<std::vector<char>> hits(ens.samples);
  parallel_for(ens.samples, ens.jobs, [&](std::size_t i) {
    Rng rng(derive_seed(ens.seed, 3, i));
    const auto m = system.sample(rng);
    auto &h = hits[i];
    h.resize(nt * tests.size());
    for (std::size_t k = 0; k < nt; ++k) {
      const Point p = system.coordinates(system.evolve(m, times[k]));
      for (std::size_t a = 0; a < tests.size(); ++a)
        h[k * tests.size() + a] = contains(tests[a].set, p) ? 1 : 0;
    }
  });
  CheckReport r;
  r.check = "measure-preservation";
  r.samples = ens.samples;
  r.seeds = {ens.seed};
  const std::size_t family = nt * tests.size();
  const double z = critical_z(policy, family);
  r.tolerances = {{"sigma", policy.sigma}, {"z", z}, {"family", double(family)}};
  for (std::size_t k = 0; k < nt; ++k)
    for (std::size_t a = 0; a < tests.size(); ++a) {
      std::uint64_t count = 0;
      for (const auto &h : hits)
        count += static_cast<std::uint64_t>(h[k * tests.size() + a]);
      const double mu =
          tests[a].measure >= 0.0 ? tests[a].measure : system.space()->measure(tests[a].set);
      CheckItem it;
      it.label = "mu(T_t^-1 " + tests[a].label + "), t=" + std::to_string(times[k]);
      it.estimate = double(count) / double(ens.samples);
      it.reference = mu;
      it.std_error = wald_stderr(mu, double(ens.samples));
      it.tolerance = z * it.std_error;
      it.count = count;
      it.total = ens.samples;
      it.status = std::abs(it.estimate - mu) <= it.tolerance ? Verdict::pass : Verdict::fail;
      if (it.status == Verdict::fail)
        it.witness = it.label + " = " + std::to_string(it.estimate) + " vs mu(A) = " +
                     std::to_string(mu);
      r.items.push_back(std::move(it));
    }
  r.settle();
  return r;
}

/// Estimated mu(C xor T_n^{-1} C) for every proper union C of cells (C and
/// its complement once). Fails when some union is invariant to within
/// `tolerance`, reporting it: the ergodicity criterion fails at step n.
template <System S>
CheckReport check_invariant_union(const S &system, const Partition &partition, double n,
                                  const Ensemble &ens, double tolerance = 1e-3) {
  const std::size_t k = partition.size();
  if (k < 2)
    throw std::invalid_argument("check_invariant_union: partition is trivial");
  if (k > 20)
    throw std::invalid_argument("check_invariant_union: more than 20 cells (2^20 unions)");
  std::vector<std::pair<std::size_t, std::size_t>> moves(ens.samples);
  parallel_for(ens.samples, ens.jobs, [&](std::size_t i) {
    Rng rng(derive_seed(ens.seed, 4, i));
    const auto m = system.sample(rng);
    moves[i] = {partition.locate(system.coordinates(m)),
                partition.locate(system.coordinates(system.evolve(m, n)))};
  });
  // Count matrix with an extra row/column for null gaps.
  std::vector<std::uint64_t> c((k + 1) * (k + 1), 0);
  for (auto [a, b] : moves)
    c[a * (k + 1) + b]++;
  CheckReport r;
  r.check = "invariant-union";
  r.samples = ens.samples;
  r.seeds = {ens.seed};
  r.tolerances = {{"tolerance", tolerance}, {"step", n}};
  double best = 2.0;
  std::uint32_t best_mask = 0;
  const std::uint32_t limit = std::uint32_t{1} << (k - 1);
  for (std::uint32_t mask = 1; mask < limit; ++mask) {
    std::uint64_t cross = 0;
    for (std::size_t a = 0; a <= k; ++a)
      for (std::size_t b = 0; b <= k; ++b) {
        const bool in_a = a < k && (mask >> a & 1u), in_b = b < k && (mask >> b & 1u);
        if (in_a != in_b)
          cross += c[a * (k + 1) + b];
      }
    const double est = double(cross) / double(ens.samples);
    auto describe = [&] {
      std::string s = "C = {";
      for (std::size_t a = 0; a < k; ++a)
        if (mask >> a & 1u)
          s += (s.size() > 5 ? "," : "") + partition.labels()[a];
      return s + "}";
    };
    if (est < best) {
      best = est;
      best_mask = mask;
    }
    if (est <= tolerance) {
      CheckItem it;
      it.label = describe();
      it.status = Verdict::fail;
      it.estimate = est;
      it.std_error = wald_stderr(est, double(ens.samples));
      it.tolerance = tolerance;
      it.count = cross;
      it.total = ens.samples;
      it.witness = "invariant union " + it.label + " at step " + std::to_string(n) +
                   ": mu(C xor T^-n C) = " + std::to_string(est);
      r.items.push_back(std::move(it));
    }
  }
  if (r.items.empty()) {
    CheckItem it;
    it.label = "min over unions";
    it.estimate = best;
    it.std_error = wald_stderr(best, double(ens.samples));
    it.tolerance = tolerance;
    it.total = ens.samples;
    it.witness = "mask " + std::to_string(best_mask);
    r.items.push_back(std::move(it));
    r.notes.push_back("no invariant union of cells found");
  }
  r.settle();
  return r;
}

/// Estimates mu{m : d(m, embed(encode(m))) >= epsilon}; passes iff the
/// estimate + sigma * stderr < epsilon. `encode` is Phi_0 composed with the
/// encoder into the representation, `embed` places outcomes in M.
template <System S, class Outcome>
CheckReport check_epsilon_congruence(
    const S &system,
    const std::function<Outcome(const typename S::state_type &)> &encode,
    const std::function<typename S::state_type(const Outcome &)> &embed, double epsilon,
    const Ensemble &ens, double sigma = 3.0) {
  if (!(epsilon > 0.0))
    throw std::invalid_argument("check_epsilon_congruence: epsilon must be positive");
  std::vector<double> dist(ens.samples);
  parallel_for(ens.samples, ens.jobs, [&](std::size_t i) {
    Rng rng(derive_seed(ens.seed, 5, i));
    const auto m = system.sample(rng);
    dist[i] = system.distance(m, embed(encode(m)));
  });
  const auto far = static_cast<std::uint64_t>(
      std::count_if(dist.begin(), dist.end(), [&](double d) { return d >= epsilon; }));
  CheckReport r;
  r.check = "epsilon-congruence";
  r.samples = ens.samples;
  r.seeds = {ens.seed};
  r.tolerances = {{"epsilon", epsilon}, {"sigma", sigma}};
  CheckItem it;
  it.label = "mu{d(m, embed(Phi_0(phi(m)))) >= epsilon}";
  it.estimate = double(far) / double(ens.samples);
  it.std_error = wald_stderr(it.estimate, double(ens.samples));
  it.tolerance = epsilon;
  it.count = far;
  it.total = ens.samples;
  it.status = it.estimate + sigma * it.std_error < epsilon ? Verdict::pass : Verdict::fail;
  if (it.status == Verdict::fail)
    it.witness = "violation measure " + std::to_string(it.estimate) + " + " +
                 std::to_string(sigma) + " sigma >= epsilon " + std::to_string(epsilon);
  r.items.push_back(std::move(it));
  CheckItem maxd;
  maxd.label = "max sampled distance";
  maxd.estimate = dist.empty() ? 0.0 : *std::max_element(dist.begin(), dist.end());
  maxd.total = ens.samples;
  r.items.push_back(std::move(maxd));
  r.settle();
  return r;
}

enum class SimulationMode { strong, weak };

/// Outcome names of Psi mapped through Gamma (identity when absent).
std::vector<std::string> mapped_alphabet(const ObservationFunction &psi,
                                         const std::optional<SymbolMap> &gamma);

/// Exact mu{m : Gamma(Psi(m)) != Phi(m)} from the common refinement, when
/// both partitions live on the same phase space with an exact measure.
std::optional<double> exact_disagreement(const ObservationFunction &phi,
                                         const ObservationFunction &psi,
                                         const std::optional<SymbolMap> &gamma);

/// Strong: mu{Psi != Phi} + sigma*se < epsilon and Psi's outcome set equals
/// Phi's. Weak: the same with Gamma o Psi in place of Psi, Gamma required.
/// The simulating process {(Gamma o) Psi(T_t)} is compared informationally
/// against {Phi(T_t)} on each grid.
template <System S>
CheckReport check_simulation(SimulationMode mode, const S &system,
                             const ObservationFunction &phi, const ObservationFunction &psi,
                             const std::optional<SymbolMap> &gamma, double epsilon,
                             const std::vector<Grid> &grids, const Ensemble &ens,
                             double sigma = 3.0) {
  if (!(epsilon > 0.0))
    throw std::invalid_argument("check_simulation: epsilon must be positive");
  if (mode == SimulationMode::weak && !gamma)
    throw std::invalid_argument("check_simulation: weak mode needs an outcome map Gamma");
  const std::optional<SymbolMap> map = mode == SimulationMode::weak ? gamma : std::nullopt;
  const auto target = mapped_alphabet(psi, map);
  std::vector<Symbol> translate(psi.alphabet().size());
  std::vector<Symbol> phi_index(target.size(), Symbol(-1));
  std::vector<std::string> names;
  for (std::size_t i = 0; i < psi.alphabet().size(); ++i) {
    const std::string &img = map ? map->at(psi.alphabet()[i]) : psi.alphabet()[i];
    auto pos = std::find(names.begin(), names.end(), img);
    if (pos == names.end()) {
      names.push_back(img);
      pos = names.end() - 1;
    }
    translate[i] = static_cast<Symbol>(pos - names.begin());
  }
  for (std::size_t j = 0; j < names.size(); ++j) {
    const auto it = std::find(phi.alphabet().begin(), phi.alphabet().end(), names[j]);
    if (it != phi.alphabet().end())
      phi_index[j] = static_cast<Symbol>(it - phi.alphabet().begin());
  }

  CheckReport r;
  r.check = mode == SimulationMode::strong ? "strong-simulation" : "weak-simulation";
  r.samples = ens.samples;
  r.seeds = {ens.seed};
  r.tolerances = {{"epsilon", epsilon}, {"sigma", sigma}};

  // (i) outcome sets.
  auto sorted = [](std::vector<std::string> v) {
    std::sort(v.begin(), v.end());
    return v;
  };
  CheckItem outcomes;
  outcomes.label = "outcome sets coincide";
  outcomes.status = sorted(names) == sorted(phi.alphabet()) ? Verdict::pass : Verdict::fail;
  if (outcomes.status == Verdict::fail)
    outcomes.witness = "outcome sets differ";
  r.items.push_back(outcomes);

  // (a) disagreement measure under mu.
  std::vector<char> differ(ens.samples);
  parallel_for(ens.samples, ens.jobs, [&](std::size_t i) {
    Rng rng(derive_seed(ens.seed, 6, i));
    const Point p = system.coordinates(system.sample(rng));
    differ[i] = phi_index[translate[psi(p)]] != phi(p) ? 1 : 0;
  });
  const auto count =
      static_cast<std::uint64_t>(std::count(differ.begin(), differ.end(), char{1}));
  CheckItem dis;
  dis.label = mode == SimulationMode::strong ? "mu{Psi != Phi}" : "mu{Gamma(Psi) != Phi}";
  dis.estimate = double(count) / double(ens.samples);
  dis.std_error = wald_stderr(dis.estimate, double(ens.samples));
  dis.tolerance = epsilon;
  dis.count = count;
  dis.total = ens.samples;
  dis.status = dis.estimate + sigma * dis.std_error < epsilon ? Verdict::pass : Verdict::fail;
  if (dis.status == Verdict::fail)
    dis.witness = dis.label + " = " + std::to_string(dis.estimate) + " not below epsilon";
  r.items.push_back(dis);
  if (const auto exact = exact_disagreement(phi, psi, map)) {
    CheckItem ex;
    ex.label = "exact " + dis.label;
    ex.estimate = *exact;
    ex.reference = *exact;
    r.items.push_back(ex);
  }

  // (b) the simulating process, reported next to the observed one.
  if (!grids.empty() && outcomes.status == Verdict::pass) {
    SymbolMap ident;
    for (const auto &n : psi.alphabet())
      ident[n] = map ? map->at(n) : n;
    const auto sim = remap_sampler(system_sampler(system, psi), ident);
    const auto obs = system_sampler(system, phi);
    auto cmp = check_observational_equivalence(sim, obs, grids, ens);
    for (auto &it : cmp.items) {
      it.label = "fdd: " + it.label;
      it.status = Verdict::pass;
      it.witness.clear();
      r.items.push_back(std::move(it));
    }
    r.notes.push_back("fdd entries are informational: simulating process vs Phi(T_t)");
  }
  r.settle();
  return r;
}

} // namespace obsequiv

#endif // OBSEQUIV_EQUIVALENCE_HPP
