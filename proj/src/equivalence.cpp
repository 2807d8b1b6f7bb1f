#include "obsequiv/equivalence.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>

namespace obsequiv {

namespace {

Grid union_grid(const std::vector<Grid> &grids) {
  Grid all;
  for (const auto &g : grids) {
    require_sorted_grid(g);
    all.insert(all.end(), g.begin(), g.end());
  }
  std::sort(all.begin(), all.end());
  all.erase(std::unique(all.begin(), all.end(),
                        [](double a, double b) { return std::abs(a - b) <= 1e-12; }),
            all.end());
  return all;
}

std::size_t entry_count(std::size_t alphabet, std::size_t grid) {
  std::size_t n = 1;
  for (std::size_t i = 0; i < grid; ++i)
    n *= alphabet;
  return n;
}

std::string grid_label(const Grid &g) {
  std::string s = "grid {";
  for (std::size_t i = 0; i < g.size(); ++i)
    s += (i ? "," : "") + std::to_string(g[i]);
  return s + "}";
}

} // namespace

CheckReport check_observational_equivalence(const PathSampler &a, const PathSampler &b,
                                            const std::vector<Grid> &grids,
                                            const Ensemble &ensemble,
                                            const TolerancePolicy &policy) {
  if (grids.empty())
    throw std::invalid_argument("check_observational_equivalence: no grids");
  CheckReport report;
  report.check = "observational-equivalence";
  report.samples = ensemble.samples;
  report.seeds = {ensemble.seed};

  const std::set<std::string> sa(a.alphabet.begin(), a.alphabet.end());
  const std::set<std::string> sb(b.alphabet.begin(), b.alphabet.end());
  if (sa != sb) {
    CheckItem it;
    it.label = "outcome sets";
    it.status = Verdict::fail;
    it.witness = "outcome sets differ";
    report.items.push_back(std::move(it));
    report.notes.push_back("outcome sets differ");
    report.settle();
    return report;
  }
  // Side B's symbols expressed in side A's alphabet order.
  std::vector<Symbol> to_a(b.alphabet.size());
  for (std::size_t i = 0; i < b.alphabet.size(); ++i)
    to_a[i] = static_cast<Symbol>(
        std::find(a.alphabet.begin(), a.alphabet.end(), b.alphabet[i]) - a.alphabet.begin());

  const Grid all = union_grid(grids);
  const auto paths_a = sample_paths(a, all, ensemble, 1);
  auto paths_b = sample_paths(b, all, ensemble, 2);
  for (auto &p : paths_b)
    for (auto &s : p.symbols)
      s = to_a[s];

  TolerancePolicy pol = policy;
  if (pol.family_size == 0)
    for (const auto &g : grids)
      pol.family_size += entry_count(a.alphabet.size(), g.size());

  std::vector<CheckReport> parts;
  for (const auto &g : grids) {
    const auto fa = estimate_fdd(paths_a, a.alphabet, g);
    const auto fb = estimate_fdd(paths_b, a.alphabet, g);
    auto part = compare_fdd(fa, fb, pol);
    part.check = grid_label(g);
    parts.push_back(std::move(part));
  }
  auto combined = combine(report.check, parts);
  combined.samples = ensemble.samples;
  combined.seeds = {ensemble.seed};
  combined.tolerances = {{"sigma", pol.sigma},
                         {"z", critical_z(pol, pol.family_size)},
                         {"family", double(pol.family_size)}};
  double max_delta = 0.0;
  for (const auto &p : parts)
    max_delta = std::max(max_delta, p.tolerances.at("max_delta"));
  combined.tolerances["max_delta"] = max_delta;
  combined.notes.push_back("sides: " + a.description + " vs " + b.description);
  combined.settle();
  return combined;
}

CheckReport check_nontriviality(const PathSampler &sampler, const std::vector<double> &lags,
                                const Ensemble &ensemble, double sigma) {
  if (sampler.alphabet.size() < 2)
    throw std::invalid_argument("check_nontriviality: observation is trivial");
  if (lags.empty())
    throw std::invalid_argument("check_nontriviality: no lags");
  CheckReport r;
  r.check = "nontriviality";
  r.samples = ensemble.samples;
  r.seeds = {ensemble.seed};
  r.tolerances = {{"sigma", sigma}};
  const std::size_t n = sampler.alphabet.size();
  for (std::size_t li = 0; li < lags.size(); ++li) {
    const double k = lags[li];
    if (!(k > 0.0))
      throw std::invalid_argument("check_nontriviality: lags must be positive");
    const Grid grid{0.0, k};
    Ensemble ens = ensemble;
    ens.seed = derive_seed(ensemble.seed, 7, li);
    const auto paths = sample_paths(sampler, grid, ens, 0);
    CheckItem it;
    it.label = "k=" + std::to_string(k);
    it.total = ensemble.samples;
    bool observed = false, found = false;
    ProbEstimate closest;
    double closest_gap = -1.0;
    for (Symbol i = 0; i < n && !found; ++i) {
      for (Symbol j = 0; j < n; ++j) {
        ProbEstimate e;
        try {
          e = conditional_estimate(paths, k, i, j, AnchorMode::first, sigma);
        } catch (const UnobservedCondition &) {
          break;
        }
        observed = true;
        // Distance of the interval from {0,1}; positive means strictly inside.
        const double gap = std::min(e.lower(), 1.0 - e.upper());
        if (gap > closest_gap) {
          closest_gap = gap;
          closest = e;
          it.witness = "P(Z[" + std::to_string(k) + "]=" + sampler.alphabet[j] + " | Z[0]=" +
                       sampler.alphabet[i] + ")";
        }
        if (e.strictly_inside_unit()) {
          found = true;
          break;
        }
      }
    }
    it.estimate = closest.estimate;
    it.std_error = closest.half_width / sigma;
    it.tolerance = closest.half_width;
    it.count = closest.numerator;
    it.reference = static_cast<double>(closest.denominator);
    if (!observed) {
      it.status = Verdict::inconclusive;
      it.witness = "no conditioning outcome observed";
    } else {
      it.status = found ? Verdict::pass : Verdict::fail;
      if (!found)
        it.witness = "all conditionals indistinguishable from 0 or 1; closest " + it.witness;
    }
    r.items.push_back(std::move(it));
  }
  r.notes.push_back("lags form a finite sample of the time set; this is evidence, not proof");
  r.settle();
  return r;
}

CheckReport check_stationarity(const PathSampler &sampler, const Grid &grid,
                               const std::vector<double> &shifts, const Ensemble &ensemble,
                               const TolerancePolicy &policy) {
  require_sorted_grid(grid);
  if (shifts.empty())
    throw std::invalid_argument("check_stationarity: no shifts");
  for (double h : shifts)
    if (!std::isfinite(h))
      throw std::invalid_argument("check_stationarity: shifts must be finite");
  const auto base = sample_paths(sampler, grid, ensemble, 1);
  const auto reference = estimate_fdd(base, sampler.alphabet, grid);
  TolerancePolicy pol = policy;
  if (pol.family_size == 0)
    pol.family_size = shifts.size() * entry_count(sampler.alphabet.size(), grid.size());
  std::vector<CheckReport> parts;
  for (std::size_t s = 0; s < shifts.size(); ++s) {
    const double h = shifts[s];
    std::vector<SymbolPath> moved;
    if (h == 0.0) {
      moved = base;
    } else {
      Grid shifted(grid);
      for (double &t : shifted)
        t += h;
      moved = sample_paths(sampler, shifted, ensemble, 10 + s);
      for (auto &p : moved)
        p.times = grid;
    }
    auto part = compare_fdd(reference, estimate_fdd(moved, sampler.alphabet, grid), pol);
    part.check = "h=" + std::to_string(h);
    parts.push_back(std::move(part));
  }
  auto r = combine("stationarity", parts);
  r.samples = ensemble.samples;
  r.seeds = {ensemble.seed};
  r.tolerances = {{"sigma", pol.sigma},
                  {"z", critical_z(pol, pol.family_size)},
                  {"family", double(pol.family_size)}};
  r.settle();
  return r;
}

std::vector<std::string> mapped_alphabet(const ObservationFunction &psi,
                                         const std::optional<SymbolMap> &gamma) {
  std::vector<std::string> out;
  for (const auto &name : psi.alphabet()) {
    std::string img = name;
    if (gamma) {
      const auto it = gamma->find(name);
      if (it == gamma->end())
        throw std::invalid_argument("check_simulation: Gamma has no image for '" + name + "'");
      img = it->second;
    }
    if (std::find(out.begin(), out.end(), img) == out.end())
      out.push_back(img);
  }
  return out;
}

std::optional<double> exact_disagreement(const ObservationFunction &phi,
                                         const ObservationFunction &psi,
                                         const std::optional<SymbolMap> &gamma) {
  const Partition &a = phi.partition();
  const Partition &b = psi.partition();
  if (a.space()->name() != b.space()->name())
    return std::nullopt;
  double mass = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) {
      const std::string &pn = phi.alphabet()[phi.symbol_of_cell(i)];
      std::string qn = psi.alphabet()[psi.symbol_of_cell(j)];
      if (gamma)
        qn = gamma->at(qn);
      if (pn != qn)
        mass += a.space()->measure(intersect(a.cells()[i], b.cells()[j]));
    }
  return mass;
}

} // namespace obsequiv
