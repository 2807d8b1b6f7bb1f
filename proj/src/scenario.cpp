#include "obsequiv/scenario.hpp"

#include "obsequiv/baker.hpp"
#include "obsequiv/billiard.hpp"
#include "obsequiv/entropy.hpp"
#include "obsequiv/equivalence.hpp"
#include "obsequiv/io.hpp"
#include "obsequiv/representation.hpp"
#include "obsequiv/rotation.hpp"
#include "obsequiv/sampler.hpp"
#include "obsequiv/suspension.hpp"

#include <json.hpp>

#include <fstream>
#include <functional>
#include <map>
#include <ostream>
#include <sstream>
#include <type_traits>
#include <variant>

namespace obsequiv {

namespace {

using json = nlohmann::json;

/// A JSON value together with its path in the document, for diagnostics.
struct Node {
  const json *j;
  std::string path;

  [[noreturn]] void fail(const std::string &msg) const { throw ConfigError(path + ": " + msg); }

  bool has(const std::string &key) const { return j->is_object() && j->contains(key); }

  Node at(const std::string &key) const {
    if (!j->is_object())
      fail("expected an object");
    const auto it = j->find(key);
    if (it == j->end())
      fail("missing field '" + key + "'");
    return {&*it, path + "." + key};
  }

  std::optional<Node> find(const std::string &key) const {
    if (!has(key))
      return std::nullopt;
    return at(key);
  }

  std::size_t size() const {
    if (!j->is_array())
      fail("expected an array");
    return j->size();
  }

  Node operator[](std::size_t i) const {
    return {&(*j)[i], path + "[" + std::to_string(i) + "]"};
  }

  std::vector<Node> items() const {
    std::vector<Node> out;
    for (std::size_t i = 0; i < size(); ++i)
      out.push_back((*this)[i]);
    return out;
  }

  std::vector<std::pair<std::string, Node>> members() const {
    if (!j->is_object())
      fail("expected an object");
    std::vector<std::pair<std::string, Node>> out;
    for (auto it = j->begin(); it != j->end(); ++it)
      out.emplace_back(it.key(), Node{&*it, path + "." + it.key()});
    return out;
  }

  std::string str() const {
    if (!j->is_string())
      fail("expected a string");
    return j->get<std::string>();
  }

  double number() const {
    if (j->is_number())
      return j->get<double>();
    if (j->is_string()) {
      // Exact forms such as "sqrt(2)" or "-1/3".
      std::string s = str();
      double sign = 1.0;
      if (!s.empty() && s.front() == '-') {
        sign = -1.0;
        s.erase(0, 1);
      }
      try {
        return sign * HoldingTime::parse(s).value();
      } catch (const std::invalid_argument &e) {
        fail(e.what());
      }
    }
    fail("expected a number");
  }

  std::uint64_t u64() const {
    if (!j->is_number_unsigned() && !(j->is_number_integer() && j->get<std::int64_t>() >= 0))
      fail("expected a nonnegative integer");
    return j->get<std::uint64_t>();
  }

  int integer() const {
    if (!j->is_number_integer())
      fail("expected an integer");
    return j->get<int>();
  }

  bool boolean() const {
    if (!j->is_boolean())
      fail("expected true or false");
    return j->get<bool>();
  }

  std::vector<double> numbers() const {
    std::vector<double> out;
    for (const auto &n : items())
      out.push_back(n.number());
    return out;
  }

  std::vector<std::string> strings() const {
    std::vector<std::string> out;
    for (const auto &n : items())
      out.push_back(n.str());
    return out;
  }
};

using AnySystem = std::variant<FlowSystem<double>, FlowSystem<BilliardState>,
                               DiscreteSystem<BakerState>,
                               FlowSystem<SuspensionState<BakerState>>>;
using AnyProcess = std::variant<MarkovChainSpec, SemiMarkovSpec>;

struct ObservationDef {
  std::string system;
  ObservationFunction obs;
};

struct Definitions {
  std::map<std::string, AnySystem> systems;
  std::map<std::string, ObservationDef> observations;
  std::map<std::string, AnyProcess> processes;
};

/// Rethrows precondition failures of library calls as located config errors.
template <class F> auto guarded(const Node &n, F &&f) -> decltype(f()) {
  try {
    return f();
  } catch (const ConfigError &) {
    throw;
  } catch (const std::invalid_argument &e) {
    n.fail(e.what());
  } catch (const std::out_of_range &e) {
    n.fail(e.what());
  }
}

Point point_of(const Node &n) {
  const auto v = n.numbers();
  if (v.empty() || v.size() > 4)
    n.fail("expected 1 to 4 coordinates");
  Point p(static_cast<Eigen::Index>(v.size()));
  for (std::size_t i = 0; i < v.size(); ++i)
    p[static_cast<Eigen::Index>(i)] = v[i];
  return p;
}

Region region_of(const Node &n) {
  Region r;
  for (const auto &b : n.items()) {
    Point lo = point_of(b.at("lo")), hi = point_of(b.at("hi"));
    if (lo.size() != hi.size())
      b.fail("lo and hi differ in dimension");
    r.push_back(Box(lo, hi));
  }
  return r;
}

const AnySystem &system_ref(const Definitions &d, const Node &n) {
  const auto name = n.str();
  const auto it = d.systems.find(name);
  if (it == d.systems.end())
    n.fail("undefined system '" + name + "'");
  return it->second;
}

const ObservationDef &observation_ref(const Definitions &d, const Node &n) {
  const auto name = n.str();
  const auto it = d.observations.find(name);
  if (it == d.observations.end())
    n.fail("undefined observation '" + name + "'");
  return it->second;
}

const AnyProcess &process_ref(const Definitions &d, const Node &n) {
  const auto name = n.str();
  const auto it = d.processes.find(name);
  if (it == d.processes.end())
    n.fail("undefined process '" + name + "'");
  return it->second;
}

PhaseSpacePtr space_of(const AnySystem &s) {
  return std::visit([](const auto &sys) { return sys.space(); }, s);
}

AnySystem parse_system(const Node &n, const Definitions &d) {
  const auto kind = n.at("kind").str();
  if (kind == "rotation")
    return guarded(n, [&] { return rotation_system(n.at("alpha").number()); });
  if (kind == "billiard") {
    std::vector<Obstacle> obstacles;
    if (auto obs = n.find("obstacles"))
      for (const auto &o : obs->items()) {
        const auto c = o.at("center").numbers();
        if (c.size() != 2)
          o.at("center").fail("expected [x, y]");
        obstacles.push_back({Eigen::Vector2d(c[0], c[1]), o.at("radius").number()});
      }
    const double speed = n.has("speed") ? n.at("speed").number() : 1.0;
    return guarded(n, [&] {
      return billiard_system(n.at("width").number(), n.at("height").number(), obstacles, speed);
    });
  }
  if (kind == "baker")
    return baker_system();
  if (kind == "suspension") {
    const Node base_node = n.at("base");
    const auto *base = std::get_if<DiscreteSystem<BakerState>>(&system_ref(d, base_node));
    if (!base)
      base_node.fail("suspension base must be a discrete system (baker)");
    const Node lab = n.at("labeling");
    const auto &labeling = observation_ref(d, lab);
    if (labeling.system != base_node.str())
      lab.fail("labeling is not an observation of the base system");
    RoofFunction roof{n.at("roof").numbers()};
    return guarded(n, [&] { return build_flow_under_function(*base, labeling.obs, roof); });
  }
  n.at("kind").fail("unsupported system kind '" + kind + "'");
}

ObservationDef parse_observation(const Node &n, const Definitions &d) {
  const Node sys_node = n.at("system");
  const auto space = space_of(system_ref(d, sys_node));
  auto obs = guarded(n, [&] {
    if (n.has("dyadic")) {
      if (space->name() != unit_square_space()->name())
        n.at("dyadic").fail("dyadic partitions need the unit square");
      return observation_from_partition(dyadic_square_partition(n.at("dyadic").integer()));
    }
    if (n.has("grid")) {
      std::vector<int> div;
      for (const auto &x : n.at("grid").items())
        div.push_back(x.integer());
      std::vector<std::string> labels;
      if (auto l = n.find("labels"))
        labels = l->strings();
      return observation_from_partition(grid_partition(space, div, labels));
    }
    if (n.has("cells")) {
      std::vector<Region> cells;
      std::vector<std::string> labels;
      for (const auto &c : n.at("cells").items()) {
        labels.push_back(c.at("label").str());
        cells.push_back(region_of(c.at("boxes")));
      }
      return observation_from_partition(Partition(space, std::move(cells), labels), labels);
    }
    n.fail("expected one of 'dyadic', 'grid' or 'cells'");
  });
  return {sys_node.str(), std::move(obs)};
}

Eigen::MatrixXd matrix_of(const Node &n) {
  const auto rows = n.items();
  if (rows.empty())
    n.fail("empty matrix");
  const std::size_t cols = rows.front().size();
  Eigen::MatrixXd m(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(cols));
  for (std::size_t r = 0; r < rows.size(); ++r) {
    const auto v = rows[r].numbers();
    if (v.size() != cols)
      rows[r].fail("ragged matrix row");
    for (std::size_t c = 0; c < cols; ++c)
      m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = v[c];
  }
  return m;
}

HoldingTime holding_of(const Node &n) {
  if (n.j->is_number_integer() && n.j->get<std::int64_t>() > 0)
    return HoldingTime(n.j->get<std::int64_t>());
  if (n.j->is_number())
    n.fail("holding time given as a bare float; write it exactly, e.g. \"3/2\" or \"sqrt(2)\"");
  return guarded(n, [&] { return HoldingTime::parse(n.str()); });
}

MarkovChainSpec chain_of(const Node &n) {
  const auto states = n.at("states").strings();
  const int order = n.has("order") ? n.at("order").integer() : 1;
  auto spec = guarded(n, [&] { return MarkovChainSpec(states, order, matrix_of(n.at("transitions"))); });
  if (!spec.valid())
    n.at("transitions").fail("invalid chain: " + spec.diagnostics().reason);
  return spec;
}

AnyProcess parse_process(const Node &n) {
  const auto kind = n.at("kind").str();
  if (kind == "markov")
    return chain_of(n);
  if (kind == "iid")
    return guarded(n, [&] {
      return iid_chain(n.at("states").strings(), n.at("probabilities").numbers());
    });
  if (kind == "semi_markov") {
    auto chain = chain_of(n);
    std::vector<HoldingTime> holding;
    for (const auto &h : n.at("holding").items())
      holding.push_back(holding_of(h));
    const bool rational = n.has("allow_rational") && n.at("allow_rational").boolean();
    return guarded(n, [&] {
      return SemiMarkovSpec(std::move(chain), std::move(holding),
                            rational ? HoldingPolicy::allow_rational
                                     : HoldingPolicy::require_irrational);
    });
  }
  n.at("kind").fail("unsupported process kind '" + kind + "'");
}

/// A sampler factory: the argument is the largest time the task will query.
using SourceFactory = std::function<PathSampler(double)>;

SourceFactory parse_source(const Node &n, const Definitions &d) {
  SourceFactory make;
  if (n.has("system")) {
    const auto &sys = system_ref(d, n.at("system"));
    const Node on = n.at("observation");
    const auto &obs = observation_ref(d, on);
    if (obs.system != n.at("system").str())
      on.fail("observation belongs to system '" + obs.system + "'");
    make = [sys, obs = obs.obs](double) {
      return std::visit([&](const auto &s) { return system_sampler(s, obs); }, sys);
    };
  } else if (n.has("process")) {
    const auto &proc = process_ref(d, n.at("process"));
    const std::string rep = n.has("representation") ? n.at("representation").str() : "none";
    if (rep != "none" && rep != "shift" && rep != "flow")
      n.at("representation").fail("expected 'shift' or 'flow'");
    if (const auto *chain = std::get_if<MarkovChainSpec>(&proc)) {
      if (rep == "flow")
        n.at("representation").fail("flow representation needs a semi-Markov process");
      if (n.has("start"))
        n.at("start").fail("fixed starts are only supported for semi-Markov processes");
      if (rep == "shift") {
        auto r = guarded(n, [&] { return ShiftRepresentation(*chain); });
        make = [r](double) { return shift_sampler(r); };
      } else {
        make = [c = *chain](double) { return markov_sampler(c); };
      }
    } else {
      const auto &spec = std::get<SemiMarkovSpec>(proc);
      if (auto st = n.find("start")) {
        std::vector<Symbol> block;
        for (const auto &s : st->at("block").items()) {
          const auto name = s.str();
          const auto &a = spec.alphabet();
          const auto it = std::find(a.begin(), a.end(), name);
          if (it == a.end())
            s.fail("unknown state '" + name + "'");
          block.push_back(static_cast<Symbol>(it - a.begin()));
        }
        if (block.empty())
          st->at("block").fail("empty start block");
        const double t0 = st->has("first_jump") ? st->at("first_jump").number()
                                                : spec.holding(block.back());
        make = [spec, block, t0](double) { return semi_markov_sampler_from(spec, block, t0); };
      } else if (rep == "shift") {
        make = [spec](double) { return shift_sampler(ShiftRepresentation(spec)); };
      } else if (rep == "flow") {
        make = [spec](double horizon) {
          return flow_rep_sampler(SemiMarkovFlowRep(spec, std::max(horizon, spec.min_holding())));
        };
      } else {
        make = [spec](double) { return semi_markov_sampler(spec); };
      }
    }
  } else {
    n.fail("a source needs 'system' + 'observation' or 'process'");
  }
  if (auto m = n.find("map")) {
    SymbolMap map;
    for (const auto &[k, v] : m->members())
      map[k] = v.str();
    return [make, map](double h) { return remap_sampler(make(h), map); };
  }
  return make;
}

std::vector<Grid> grids_of(const Node &n) {
  std::vector<Grid> out;
  for (const auto &g : n.items()) {
    auto v = g.numbers();
    if (v.empty())
      g.fail("empty grid");
    if (!std::is_sorted(v.begin(), v.end()))
      g.fail("grid times must be ascending");
    out.push_back(std::move(v));
  }
  if (out.empty())
    n.fail("no grids");
  return out;
}

double max_time(const std::vector<Grid> &grids) {
  double t = 0.0;
  for (const auto &g : grids)
    t = std::max(t, g.back());
  return t;
}

SymbolMap map_of(const Node &n) {
  SymbolMap map;
  for (const auto &[k, v] : n.members())
    map[k] = v.str();
  return map;
}

struct TaskOutput {
  CheckReport report;
  std::string csv;
  std::string path_csv;
};

struct Task {
  std::string kind;
  std::function<TaskOutput(const Ensemble &)> run;
  std::uint64_t seed = 0;
  std::size_t samples = 10000;
};

Task parse_task(const Node &n, const Definitions &d, std::uint64_t master) {
  Task task;
  task.kind = n.at("kind").str();
  task.seed = n.has("seed") ? n.at("seed").u64() : master;
  if (auto s = n.find("N")) {
    task.samples = s->u64();
    if (task.samples == 0)
      s->fail("N must be positive");
  }
  const std::string &kind = task.kind;

  if (kind == "simulate") {
    auto src = parse_source(n.at("source"), d);
    auto grid_node = n.at("grid");
    Grid g = grid_node.numbers();
    if (g.empty() || !std::is_sorted(g.begin(), g.end()))
      grid_node.fail("grid must be nonempty and ascending");
    bool export_path = n.has("export_path") && n.at("export_path").boolean();
    std::optional<SemiMarkovSpec> path_spec;
    if (export_path) {
      const Node src_node = n.at("source");
      if (!src_node.has("process") ||
          !std::holds_alternative<SemiMarkovSpec>(process_ref(d, src_node.at("process"))))
        n.at("export_path").fail("path export needs a semi-Markov process source");
      path_spec = std::get<SemiMarkovSpec>(process_ref(d, src_node.at("process")));
    }
    task.run = [src, g, path_spec](const Ensemble &ens) {
      const auto sampler = src(g.back());
      const auto paths = sample_paths(sampler, g, ens, 1);
      const auto fdd = estimate_fdd(paths, sampler.alphabet, g);
      TaskOutput out;
      out.report.check = "simulate";
      out.report.samples = ens.samples;
      out.report.seeds = {ens.seed};
      for (std::size_t e = 0; e < fdd.events().size(); ++e) {
        CheckItem it;
        it.label = fdd.describe(e);
        it.estimate = fdd.probability(e);
        it.std_error = fdd.std_error(e);
        it.count = fdd.count(e);
        it.total = fdd.samples();
        out.report.items.push_back(std::move(it));
      }
      std::ostringstream csv;
      write_fdd_csv(csv, fdd);
      out.csv = csv.str();
      if (path_spec) {
        std::ostringstream p;
        write_path_csv(p, sample_semi_markov(*path_spec, std::max(g.back(), path_spec->min_holding()),
                                             derive_seed(ens.seed, 9, 0)),
                       path_spec->alphabet());
        out.path_csv = p.str();
      }
      return out;
    };
    return task;
  }

  if (kind == "represent") {
    const Node pn = n.at("process");
    const auto &proc = process_ref(d, pn);
    const std::string rep = n.at("representation").str();
    if (rep != "shift" && rep != "flow")
      n.at("representation").fail("expected 'shift' or 'flow'");
    if (rep == "flow" && !std::holds_alternative<SemiMarkovSpec>(proc))
      n.at("representation").fail("flow representation needs a semi-Markov process");
    auto grids = grids_of(n.at("grids"));
    SourceFactory process_side, rep_side;
    if (const auto *chain = std::get_if<MarkovChainSpec>(&proc)) {
      auto r = guarded(n, [&] { return ShiftRepresentation(*chain); });
      process_side = [c = *chain](double) { return markov_sampler(c); };
      rep_side = [r](double) { return shift_sampler(r); };
    } else {
      const auto &spec = std::get<SemiMarkovSpec>(proc);
      process_side = [spec](double) { return semi_markov_sampler(spec); };
      if (rep == "shift")
        rep_side = [spec](double) { return shift_sampler(ShiftRepresentation(spec)); };
      else
        rep_side = [spec](double h) {
          return flow_rep_sampler(SemiMarkovFlowRep(spec, std::max(h, spec.min_holding())));
        };
    }
    task.run = [process_side, rep_side, grids](const Ensemble &ens) {
      const double h = max_time(grids);
      return TaskOutput{check_observational_equivalence(process_side(h), rep_side(h), grids, ens),
                        {}, {}};
    };
    return task;
  }

  if (kind == "check:equivalence") {
    auto a = parse_source(n.at("a"), d);
    auto b = parse_source(n.at("b"), d);
    auto grids = grids_of(n.at("grids"));
    task.run = [a, b, grids](const Ensemble &ens) {
      const double h = max_time(grids);
      return TaskOutput{check_observational_equivalence(a(h), b(h), grids, ens), {}, {}};
    };
    return task;
  }

  if (kind == "check:nontriviality") {
    auto src = parse_source(n.at("source"), d);
    auto lags = n.at("lags").numbers();
    if (lags.empty())
      n.at("lags").fail("no lags");
    for (double k : lags)
      if (!(k > 0.0))
        n.at("lags").fail("lags must be positive");
    task.run = [src, lags](const Ensemble &ens) {
      const auto s = src(*std::max_element(lags.begin(), lags.end()));
      return TaskOutput{check_nontriviality(s, lags, ens), {}, {}};
    };
    // A trivial observation is a configuration error, caught before running.
    if (src(lags.front()).alphabet.size() < 2)
      n.at("source").fail("observation is trivial (fewer than two outcomes)");
    return task;
  }

  if (kind == "check:stationarity") {
    auto src = parse_source(n.at("source"), d);
    Grid g = n.at("grid").numbers();
    if (g.empty() || !std::is_sorted(g.begin(), g.end()))
      n.at("grid").fail("grid must be nonempty and ascending");
    auto shifts = n.at("shifts").numbers();
    if (shifts.empty())
      n.at("shifts").fail("no shifts");
    task.run = [src, g, shifts](const Ensemble &ens) {
      const double h = g.back() + *std::max_element(shifts.begin(), shifts.end());
      return TaskOutput{check_stationarity(src(h), g, shifts, ens), {}, {}};
    };
    return task;
  }

  if (kind == "check:measure") {
    const auto &sys = system_ref(d, n.at("system"));
    std::vector<MeasureTest> tests;
    for (const auto &s : n.at("sets").items()) {
      MeasureTest t;
      t.label = s.has("label") ? s.at("label").str() : s.path;
      t.set = region_of(s.at("boxes"));
      if (s.has("measure"))
        t.measure = s.at("measure").number();
      tests.push_back(std::move(t));
    }
    auto times = n.at("times").numbers();
    if (tests.empty() || times.empty())
      n.fail("need nonempty 'sets' and 'times'");
    task.run = [sys, tests, times](const Ensemble &ens) {
      return TaskOutput{std::visit([&](const auto &s) {
                          return check_measure_preservation(s, tests, times, ens);
                        }, sys),
                        {}, {}};
    };
    return task;
  }

  if (kind == "check:invariant") {
    const auto &sys = system_ref(d, n.at("system"));
    const auto &obs = observation_ref(d, n.at("observation"));
    if (obs.system != n.at("system").str())
      n.at("observation").fail("observation belongs to system '" + obs.system + "'");
    const double step = n.at("step").number();
    const double tol = n.has("tolerance") ? n.at("tolerance").number() : 1e-3;
    const std::size_t cells = obs.obs.partition().size();
    if (cells < 2)
      n.at("observation").fail("partition is trivial");
    if (cells > 20)
      n.at("observation").fail("more than 20 cells (2^20 unions cap)");
    task.run = [sys, p = obs.obs.partition(), step, tol](const Ensemble &ens) {
      return TaskOutput{std::visit([&](const auto &s) {
                          return check_invariant_union(s, p, step, ens, tol);
                        }, sys),
                        {}, {}};
    };
    return task;
  }

  if (kind == "check:congruence") {
    const Node sn = n.at("system");
    const auto &sys = system_ref(d, sn);
    const double eps = n.at("epsilon").number();
    if (!(eps > 0.0))
      n.at("epsilon").fail("epsilon must be positive");
    if (const auto *baker = std::get_if<DiscreteSystem<BakerState>>(&sys); baker && n.has("bits")) {
      const int bits = n.at("bits").integer();
      if (bits < 1 || bits > 15)
        n.at("bits").fail("bits must be in [1, 15]");
      task.run = [b = *baker, bits, eps](const Ensemble &ens) {
        std::function<Symbol(const BakerState &)> enc = [bits](const BakerState &s) {
          return static_cast<Symbol>(dyadic_cell(s, bits));
        };
        std::function<BakerState(const Symbol &)> emb = [bits](const Symbol &c) {
          const auto p = dyadic_cell_center(c, bits);
          return BakerState::from_coordinates(p.x(), p.y());
        };
        return TaskOutput{check_epsilon_congruence(b, enc, emb, eps, ens), {}, {}};
      };
      return task;
    }
    const Node on = n.at("observation");
    const auto &obs = observation_ref(d, on);
    if (obs.system != sn.str())
      on.fail("observation belongs to system '" + obs.system + "'");
    // Cell-centre embedding: the centre of the first box of each outcome's first cell.
    std::vector<Point> centers(obs.obs.alphabet().size());
    std::vector<bool> seen(centers.size(), false);
    for (std::size_t c = 0; c < obs.obs.partition().size(); ++c) {
      const Symbol s = obs.obs.symbol_of_cell(c);
      if (!seen[s] && !obs.obs.partition().cells()[c].empty()) {
        const Box &b = obs.obs.partition().cells()[c].front();
        centers[s] = (b.lo + b.hi) / 2.0;
        seen[s] = true;
      }
    }
    if (const auto *rot = std::get_if<FlowSystem<double>>(&sys)) {
      task.run = [r = *rot, o = obs.obs, centers, eps](const Ensemble &ens) {
        std::function<Symbol(const double &)> enc = [o](const double &m) {
          return o(make_point({m}));
        };
        std::function<double(const Symbol &)> emb = [centers](const Symbol &s) {
          return centers[s][0];
        };
        return TaskOutput{check_epsilon_congruence(r, enc, emb, eps, ens), {}, {}};
      };
    } else if (const auto *baker = std::get_if<DiscreteSystem<BakerState>>(&sys)) {
      task.run = [b = *baker, o = obs.obs, centers, eps](const Ensemble &ens) {
        std::function<Symbol(const BakerState &)> enc = [o, b](const BakerState &m) {
          return o(b.coordinates(m));
        };
        std::function<BakerState(const Symbol &)> emb = [centers](const Symbol &s) {
          return BakerState::from_coordinates(centers[s][0], centers[s][1]);
        };
        return TaskOutput{check_epsilon_congruence(b, enc, emb, eps, ens), {}, {}};
      };
    } else {
      sn.fail("congruence tasks support rotation and baker systems");
    }
    return task;
  }

  if (kind == "check:simulation") {
    const Node sn = n.at("system");
    const auto &sys = system_ref(d, sn);
    const std::string mode_text = n.at("mode").str();
    if (mode_text != "strong" && mode_text != "weak")
      n.at("mode").fail("expected 'strong' or 'weak'");
    const auto mode = mode_text == "strong" ? SimulationMode::strong : SimulationMode::weak;
    const auto &phi = observation_ref(d, n.at("phi"));
    const auto &psi = observation_ref(d, n.at("psi"));
    if (phi.system != sn.str() || psi.system != sn.str())
      sn.fail("phi and psi must both observe this system");
    std::optional<SymbolMap> gamma;
    if (auto g = n.find("gamma"))
      gamma = map_of(*g);
    if (mode == SimulationMode::weak && !gamma)
      n.fail("weak mode needs 'gamma'");
    if (gamma)
      guarded(n.at("gamma"), [&] { return mapped_alphabet(psi.obs, gamma); });
    const double eps = n.at("epsilon").number();
    if (!(eps > 0.0))
      n.at("epsilon").fail("epsilon must be positive");
    std::vector<Grid> grids;
    if (n.has("grids"))
      grids = grids_of(n.at("grids"));
    task.run = [sys, mode, phi = phi.obs, psi = psi.obs, gamma, eps, grids](const Ensemble &ens) {
      return TaskOutput{std::visit([&](const auto &s) {
                          return check_simulation(mode, s, phi, psi, gamma, eps, grids, ens);
                        }, sys),
                        {}, {}};
    };
    return task;
  }

  if (kind == "entropy") {
    auto src = parse_source(n.at("source"), d);
    const double step = n.at("step").number();
    if (!(step > 0.0))
      n.at("step").fail("step must be positive");
    const std::size_t length = n.at("length").u64();
    const std::size_t sequences = n.has("sequences") ? n.at("sequences").u64() : 1;
    const std::size_t lmax = n.at("max_length").u64();
    const double threshold = n.has("threshold") ? n.at("threshold").number() : 0.05;
    std::optional<bool> expect;
    if (auto e = n.find("expect")) {
      const auto v = e->str();
      if (v != "positive" && v != "vanishing")
        e->fail("expected 'positive' or 'vanishing'");
      expect = v == "positive";
    }
    if (length < 2 || sequences == 0 || lmax == 0)
      n.fail("need length >= 2, sequences >= 1 and max_length >= 1");
    if (max_guarded_length(std::uint64_t(length) * sequences,
                           src(0.0).alphabet.size()) < lmax)
      n.at("max_length").fail("undersampled: need 100*K^L symbols at L = max_length");
    task.samples = sequences;
    task.run = [src, step, length, lmax, threshold, expect](const Ensemble &ens) {
      const Grid grid = time_grid(0.0, step * double(length - 1), step);
      const auto sampler = src(grid.back());
      const auto paths = sample_paths(sampler, grid, ens, 8);
      std::vector<std::vector<Symbol>> seqs;
      seqs.reserve(paths.size());
      for (const auto &p : paths)
        seqs.push_back(p.symbols);
      const auto trend = entropy_rate(seqs, lmax, sampler.alphabet.size(), threshold, ens.jobs);
      TaskOutput out;
      auto &r = out.report;
      r.check = "entropy";
      r.samples = ens.samples;
      r.seeds = {ens.seed};
      r.tolerances = {{"threshold", threshold}, {"step", step}};
      for (const auto &e : trend.estimates) {
        CheckItem it;
        it.label = "H_" + std::to_string(e.length);
        it.estimate = e.entropy;
        it.reference = e.increment;
        it.count = e.distinct;
        it.total = e.blocks;
        r.items.push_back(std::move(it));
      }
      CheckItem flag;
      flag.label = "rate flag";
      flag.estimate = trend.last_increment;
      flag.tolerance = threshold;
      flag.witness = trend.flag();
      if (expect && *expect != trend.positive) {
        flag.status = Verdict::fail;
        flag.witness += std::string(" (expected ") +
                        (*expect ? "positive-rate" : "vanishing-rate") + ")";
      }
      r.items.push_back(std::move(flag));
      r.notes.push_back(std::string("flag: ") + trend.flag());
      r.notes.push_back("block entropies bound the entropy of the sampled process from below");
      r.settle();
      std::ostringstream csv;
      write_entropy_csv(csv, trend);
      out.csv = csv.str();
      return out;
    };
    return task;
  }

  n.at("kind").fail("unknown task kind '" + kind + "'");
}

std::string location(const std::string &text, std::size_t byte) {
  std::size_t line = 1, col = 1;
  for (std::size_t i = 0; i < std::min(byte, text.size()); ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return std::to_string(line) + ":" + std::to_string(col);
}

std::string file_stem_for(std::size_t index, const std::string &kind) {
  std::string k = kind;
  std::replace(k.begin(), k.end(), ':', '-');
  return std::to_string(index) + "-" + k;
}

void write_file(const std::filesystem::path &p, const std::string &content) {
  std::ofstream f(p, std::ios::binary);
  if (!f)
    throw std::runtime_error("cannot write " + p.string());
  f << content;
}

} // namespace

OutputFormat parse_format(const std::string &text) {
  if (text == "json")
    return OutputFormat::json;
  if (text == "csv")
    return OutputFormat::csv;
  if (text == "both")
    return OutputFormat::both;
  throw ConfigError("--format: expected json, csv or both");
}

ScenarioResult run_scenario_text(const std::string &text, const std::string &stem,
                                 const RunOptions &options, std::ostream &log) {
  json doc;
  try {
    doc = json::parse(text, nullptr, true, true);
  } catch (const json::parse_error &e) {
    throw ConfigError(location(text, e.byte) + ": " + e.what());
  }
  const Node root{&doc, "$"};
  if (!doc.is_object())
    root.fail("scenario must be an object");
  for (const auto &[key, _] : root.members())
    if (key != "seed" && key != "systems" && key != "observations" && key != "processes" &&
        key != "tasks" && key != "description")
      root.at(key).fail("unknown section");
  const std::uint64_t master = options.seed ? *options.seed : root.at("seed").u64();

  Definitions defs;
  // Suspensions are labelled by observations of their base, and observations
  // may in turn live on suspensions, so definitions resolve in stages.
  const auto systems = root.find("systems");
  const auto observations = root.find("observations");
  auto is_suspension = [](const Node &node) {
    return node.has("kind") && node.at("kind").j->is_string() && node.at("kind").str() == "suspension";
  };
  auto add_observations = [&](bool final_pass) {
    if (!observations)
      return;
    for (const auto &[name, node] : observations->members()) {
      if (defs.observations.count(name))
        continue;
      const bool ready = node.has("system") && node.at("system").j->is_string() &&
                         defs.systems.count(node.at("system").str());
      if (ready || final_pass)
        defs.observations.emplace(name, parse_observation(node, defs));
    }
  };
  if (systems)
    for (const auto &[name, node] : systems->members())
      if (!is_suspension(node))
        defs.systems.emplace(name, parse_system(node, defs));
  add_observations(false);
  if (systems)
    for (const auto &[name, node] : systems->members())
      if (is_suspension(node))
        defs.systems.emplace(name, parse_system(node, defs));
  add_observations(true);
  if (auto p = root.find("processes"))
    for (const auto &[name, node] : p->members())
      defs.processes.emplace(name, parse_process(node));

  std::vector<Task> tasks;
  const Node task_list = root.at("tasks");
  for (const auto &t : task_list.items())
    tasks.push_back(parse_task(t, defs, master));

  const bool want_json = options.format != OutputFormat::csv;
  const bool want_csv = options.format != OutputFormat::json;
  const auto dir = options.out / stem;
  std::filesystem::create_directories(dir);

  ScenarioResult result;
  for (std::size_t i = 0; i < tasks.size(); ++i) {
    const Task &task = tasks[i];
    Ensemble ens;
    ens.samples = task.samples;
    ens.seed = task.seed;
    ens.jobs = std::max(1u, options.jobs);
    TaskOutput out;
    try {
      out = task.run(ens);
    } catch (const std::invalid_argument &e) {
      throw ConfigError(task_list[i].path + ": " + e.what());
    } catch (const std::out_of_range &e) {
      throw ConfigError(task_list[i].path + ": " + e.what());
    }
    TaskResult tr;
    tr.index = i;
    tr.kind = task.kind;
    const auto base = file_stem_for(i, task.kind);
    if (want_json) {
      const auto p = dir / (base + ".json");
      write_file(p, report_document(task.kind, out.report).dump(2) + "\n");
      tr.files.push_back(p);
    }
    if (want_csv && !out.csv.empty()) {
      const auto p = dir / (base + ".csv");
      write_file(p, out.csv);
      tr.files.push_back(p);
    }
    if (want_csv && !out.path_csv.empty()) {
      const auto p = dir / (base + "-path.csv");
      write_file(p, out.path_csv);
      tr.files.push_back(p);
    }
    log << "[" << i << "] " << task.kind << ": " << to_string(out.report.verdict);
    if (const auto *f = out.report.first_failure())
      log << " (" << (f->witness.empty() ? f->label : f->witness) << ")";
    log << "\n";
    if (!out.report.passed())
      result.exit_code = 1;
    tr.report = std::move(out.report);
    result.tasks.push_back(std::move(tr));
  }
  return result;
}

int run_scenario(const std::filesystem::path &path, const RunOptions &options, std::ostream &log,
                 std::ostream &err) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    err << path.string() << ": cannot open scenario\n";
    return 2;
  }
  std::stringstream buf;
  buf << in.rdbuf();
  try {
    return run_scenario_text(buf.str(), path.stem().string(), options, log).exit_code;
  } catch (const ConfigError &e) {
    err << path.string() << ":" << e.what() << "\n";
    return 2;
  }
}

} // namespace obsequiv
