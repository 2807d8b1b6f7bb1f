#include "obsequiv/markov.hpp"

#include <Eigen/LU>

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <stdexcept>

namespace obsequiv {

namespace {

std::size_t power(std::size_t base, int exp) {
  std::size_t out = 1;
  for (int i = 0; i < exp; ++i) {
    if (out > (std::size_t{1} << 24) / std::max<std::size_t>(base, 1))
      throw std::invalid_argument("markov: block space too large");
    out *= base;
  }
  return out;
}

// Strongly connected components (Tarjan, iterative). Returns component id per node.
std::vector<std::size_t> components(const std::vector<std::vector<std::size_t>> &adj,
                                    std::size_t &count) {
  const std::size_t n = adj.size();
  constexpr std::size_t unset = static_cast<std::size_t>(-1);
  std::vector<std::size_t> index(n, unset), low(n, 0), comp(n, unset);
  std::vector<bool> on_stack(n, false);
  std::vector<std::size_t> stack;
  std::size_t next = 0;
  count = 0;
  struct Frame {
    std::size_t node, edge;
  };
  for (std::size_t root = 0; root < n; ++root) {
    if (index[root] != unset)
      continue;
    std::vector<Frame> frames{{root, 0}};
    index[root] = low[root] = next++;
    stack.push_back(root);
    on_stack[root] = true;
    while (!frames.empty()) {
      Frame &f = frames.back();
      if (f.edge < adj[f.node].size()) {
        const std::size_t w = adj[f.node][f.edge++];
        if (index[w] == unset) {
          index[w] = low[w] = next++;
          stack.push_back(w);
          on_stack[w] = true;
          frames.push_back({w, 0});
        } else if (on_stack[w]) {
          low[f.node] = std::min(low[f.node], index[w]);
        }
        continue;
      }
      const std::size_t v = f.node;
      frames.pop_back();
      if (!frames.empty())
        low[frames.back().node] = std::min(low[frames.back().node], low[v]);
      if (low[v] == index[v]) {
        std::size_t w;
        do {
          w = stack.back();
          stack.pop_back();
          on_stack[w] = false;
          comp[w] = count;
        } while (w != v);
        ++count;
      }
    }
  }
  return comp;
}

std::vector<double> cumulative_row(const Eigen::MatrixXd &m, Eigen::Index row) {
  std::vector<double> c(static_cast<std::size_t>(m.cols()));
  double acc = 0.0;
  for (Eigen::Index j = 0; j < m.cols(); ++j) {
    acc += m(row, j);
    c[static_cast<std::size_t>(j)] = acc;
  }
  return c;
}

} // namespace

ChainDiagnostics validate_markov_spec(std::size_t states, int order,
                                      const Eigen::MatrixXd &transitions) {
  if (states == 0)
    throw std::invalid_argument("markov: need at least one state");
  if (order < 1)
    throw std::invalid_argument("markov: order must be >= 1");
  const std::size_t blocks = power(states, order);
  if (static_cast<std::size_t>(transitions.rows()) != blocks ||
      static_cast<std::size_t>(transitions.cols()) != states)
    throw std::invalid_argument("markov: transition table must have N^order rows and N columns");
  for (Eigen::Index r = 0; r < transitions.rows(); ++r) {
    if ((transitions.row(r).array() < 0.0).any() || !transitions.row(r).allFinite())
      throw std::invalid_argument("markov: row " + std::to_string(r) +
                                  " has a negative or non-finite entry");
    if (std::abs(transitions.row(r).sum() - 1.0) > 1e-12)
      throw std::invalid_argument("markov: row " + std::to_string(r) + " does not sum to 1");
  }

  const std::size_t tail = blocks / states;
  std::vector<std::vector<std::size_t>> adj(blocks);
  for (std::size_t b = 0; b < blocks; ++b)
    for (std::size_t x = 0; x < states; ++x)
      if (transitions(static_cast<Eigen::Index>(b), static_cast<Eigen::Index>(x)) > 0.0)
        adj[b].push_back((b % tail) * states + x);

  ChainDiagnostics d;
  std::size_t ncomp = 0;
  const auto comp = components(adj, ncomp);
  std::vector<bool> closed(ncomp, true);
  for (std::size_t b = 0; b < blocks; ++b)
    for (std::size_t w : adj[b])
      if (comp[w] != comp[b])
        closed[comp[b]] = false;
  const auto closed_count = std::count(closed.begin(), closed.end(), true);
  if (closed_count != 1) {
    d.reason = "reducible: " + std::to_string(closed_count) + " closed classes";
    return d;
  }
  const std::size_t cls =
      static_cast<std::size_t>(std::find(closed.begin(), closed.end(), true) - closed.begin());
  for (std::size_t b = 0; b < blocks; ++b)
    if (comp[b] == cls)
      d.recurrent_blocks.push_back(b);
  // Order 1: every state must be recurrent. Higher orders may have transient
  // histories (forbidden words), which carry no stationary mass.
  d.irreducible = order > 1 || d.recurrent_blocks.size() == blocks;
  if (!d.irreducible) {
    d.reason = "reducible: transient states present";
    return d;
  }

  // Period: gcd of level differences along edges inside the class.
  const std::size_t m = d.recurrent_blocks.size();
  std::vector<long> level(blocks, -1);
  std::vector<std::size_t> queue{d.recurrent_blocks.front()};
  level[queue.front()] = 0;
  for (std::size_t qi = 0; qi < queue.size(); ++qi)
    for (std::size_t w : adj[queue[qi]])
      if (level[w] < 0) {
        level[w] = level[queue[qi]] + 1;
        queue.push_back(w);
      }
  long g = 0;
  for (std::size_t b : d.recurrent_blocks)
    for (std::size_t w : adj[b])
      g = std::gcd(g, std::abs(level[b] + 1 - level[w]));
  d.period = static_cast<std::size_t>(g);
  d.aperiodic = d.period == 1;

  // Stationary law of the block chain restricted to the closed class.
  std::vector<std::size_t> pos(blocks, m);
  for (std::size_t i = 0; i < m; ++i)
    pos[d.recurrent_blocks[i]] = i;
  Eigen::MatrixXd q = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(m));
  for (std::size_t i = 0; i < m; ++i) {
    const std::size_t b = d.recurrent_blocks[i];
    for (std::size_t x = 0; x < states; ++x) {
      const std::size_t w = (b % tail) * states + x;
      const double p = transitions(static_cast<Eigen::Index>(b), static_cast<Eigen::Index>(x));
      if (p > 0.0)
        q(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(pos[w])) += p;
    }
  }
  Eigen::MatrixXd a = q.transpose() - Eigen::MatrixXd::Identity(q.rows(), q.cols());
  a.row(a.rows() - 1).setOnes();
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(a.rows());
  rhs(rhs.size() - 1) = 1.0;
  d.stationary = a.fullPivLu().solve(rhs);
  d.residual = (q.transpose() * d.stationary - d.stationary).cwiseAbs().maxCoeff();
  d.residual = std::max(d.residual, std::abs(d.stationary.sum() - 1.0));

  d.state_marginal = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(states));
  for (std::size_t i = 0; i < m; ++i)
    d.state_marginal(static_cast<Eigen::Index>(d.recurrent_blocks[i] % states)) +=
        d.stationary(static_cast<Eigen::Index>(i));

  if (!d.aperiodic)
    d.reason = "periodic (period " + std::to_string(d.period) + ")";
  else if (d.residual > 1e-10)
    d.reason = "stationary solve residual " + std::to_string(d.residual) + " exceeds 1e-10";
  else if ((d.state_marginal.array() <= 1e-15).any())
    d.reason = "some state has zero stationary probability";
  else
    d.valid = true;
  return d;
}

MarkovChainSpec::MarkovChainSpec(std::vector<std::string> states, int order,
                                 Eigen::MatrixXd transitions)
    : states_(std::move(states)), order_(order), transitions_(std::move(transitions)) {
  diagnostics_ = validate_markov_spec(states_.size(), order_, transitions_);
  {
    auto sorted = states_;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
      throw std::invalid_argument("markov: duplicate state names");
  }
  cumulative_.reserve(static_cast<std::size_t>(transitions_.rows()));
  for (Eigen::Index r = 0; r < transitions_.rows(); ++r)
    cumulative_.push_back(cumulative_row(transitions_, r));
}

MarkovChainSpec::MarkovChainSpec(std::vector<std::string> states, Eigen::MatrixXd transitions)
    : MarkovChainSpec(std::move(states), 1, std::move(transitions)) {}

std::size_t MarkovChainSpec::block_count() const {
  return static_cast<std::size_t>(transitions_.rows());
}

std::size_t MarkovChainSpec::successor(std::size_t block, Symbol next) const {
  return (block % (block_count() / size())) * size() + next;
}

std::vector<Symbol> MarkovChainSpec::block_symbols(std::size_t block) const {
  std::vector<Symbol> out(static_cast<std::size_t>(order_));
  for (int i = order_ - 1; i >= 0; --i) {
    out[static_cast<std::size_t>(i)] = static_cast<Symbol>(block % size());
    block /= size();
  }
  return out;
}

std::size_t MarkovChainSpec::block_code(std::span<const Symbol> symbols) const {
  if (symbols.size() != static_cast<std::size_t>(order_))
    throw std::invalid_argument("markov: block must have `order` symbols");
  std::size_t code = 0;
  for (Symbol s : symbols) {
    if (s >= size())
      throw std::invalid_argument("markov: symbol out of range");
    code = code * size() + s;
  }
  return code;
}

Symbol MarkovChainSpec::first_symbol(std::size_t block) const {
  return static_cast<Symbol>(block / (block_count() / size()));
}

void MarkovChainSpec::require_valid(const char *what) const {
  if (!diagnostics_.valid)
    throw std::invalid_argument(std::string(what) + ": invalid Markov spec (" +
                                diagnostics_.reason + ")");
}

std::vector<Symbol> continue_chain(const MarkovChainSpec &spec, std::size_t length,
                                   std::vector<Symbol> prefix, Rng &rng) {
  const auto n = static_cast<std::size_t>(spec.order());
  if (prefix.size() < n)
    throw std::invalid_argument("markov: prefix shorter than the chain order");
  std::size_t block = spec.block_code(std::span<const Symbol>(prefix).last(n));
  prefix.reserve(std::max(length, prefix.size()));
  while (prefix.size() < length) {
    const auto next = static_cast<Symbol>(draw_index(rng, spec.cumulative_[block]));
    prefix.push_back(next);
    block = spec.successor(block, next);
  }
  return prefix;
}

std::vector<Symbol> sample_chain(const MarkovChainSpec &spec, std::size_t length, Rng &rng) {
  spec.require_valid("sample_chain");
  const auto &d = spec.diagnostics();
  std::vector<double> cum(d.stationary.size());
  std::partial_sum(d.stationary.begin(), d.stationary.end(), cum.begin());
  const std::size_t start = d.recurrent_blocks[draw_index(rng, cum)];
  auto out = continue_chain(spec, length, spec.block_symbols(start), rng);
  out.resize(length);
  return out;
}

std::vector<Symbol> sample_chain(const MarkovChainSpec &spec, std::size_t length,
                                 std::uint64_t seed) {
  Rng rng(seed);
  return sample_chain(spec, length, rng);
}

std::vector<Symbol> sample_chain_from(const Eigen::MatrixXd &transitions,
                                      const Eigen::VectorXd &initial, std::size_t length,
                                      Rng &rng) {
  if (transitions.rows() != transitions.cols() || initial.size() != transitions.rows())
    throw std::invalid_argument("sample_chain_from: shape mismatch");
  std::vector<std::vector<double>> rows;
  for (Eigen::Index r = 0; r < transitions.rows(); ++r)
    rows.push_back(cumulative_row(transitions, r));
  std::vector<double> init(static_cast<std::size_t>(initial.size()));
  std::partial_sum(initial.begin(), initial.end(), init.begin());
  std::vector<Symbol> out;
  out.reserve(length);
  if (length == 0)
    return out;
  auto s = draw_index(rng, init);
  out.push_back(static_cast<Symbol>(s));
  while (out.size() < length) {
    s = draw_index(rng, rows[s]);
    out.push_back(static_cast<Symbol>(s));
  }
  return out;
}

MarkovChainSpec block_embedding(const MarkovChainSpec &spec) {
  spec.require_valid("block_embedding");
  if (spec.order() == 1)
    return spec;
  const auto &blocks = spec.diagnostics().recurrent_blocks;
  const std::size_t m = blocks.size();
  std::vector<std::size_t> pos(spec.block_count(), m);
  for (std::size_t i = 0; i < m; ++i)
    pos[blocks[i]] = i;
  std::vector<std::string> names;
  Eigen::MatrixXd p = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(m));
  for (std::size_t i = 0; i < m; ++i) {
    std::string name;
    for (Symbol s : spec.block_symbols(blocks[i])) {
      if (!name.empty())
        name += '.';
      name += spec.states()[s];
    }
    names.push_back(std::move(name));
    for (std::size_t x = 0; x < spec.size(); ++x) {
      const double q = spec.transitions()(static_cast<Eigen::Index>(blocks[i]),
                                          static_cast<Eigen::Index>(x));
      if (q > 0.0)
        p(static_cast<Eigen::Index>(i),
          static_cast<Eigen::Index>(pos[spec.successor(blocks[i], static_cast<Symbol>(x))])) += q;
    }
  }
  return MarkovChainSpec(std::move(names), 1, std::move(p));
}

std::vector<Symbol> to_block_sequence(const MarkovChainSpec &spec,
                                      std::span<const Symbol> sequence) {
  const auto n = static_cast<std::size_t>(spec.order());
  const auto &blocks = spec.diagnostics().recurrent_blocks;
  std::vector<Symbol> out;
  if (sequence.size() < n)
    return out;
  out.reserve(sequence.size() - n + 1);
  for (std::size_t i = 0; i + n <= sequence.size(); ++i) {
    const std::size_t code = spec.block_code(sequence.subspan(i, n));
    const auto it = std::lower_bound(blocks.begin(), blocks.end(), code);
    if (it == blocks.end() || *it != code)
      throw std::invalid_argument("to_block_sequence: sequence visits a transient block");
    out.push_back(static_cast<Symbol>(it - blocks.begin()));
  }
  return out;
}

CheckReport check_markov_property(std::span<const std::vector<Symbol>> sequences,
                                  std::size_t alphabet, int order,
                                  const TolerancePolicy &policy) {
  if (order < 1 || alphabet == 0)
    throw std::invalid_argument("check_markov_property: need order >= 1 and a nonempty alphabet");
  const auto n = static_cast<std::size_t>(order);
  const std::size_t contexts = power(alphabet, order);
  // counts[(extra * contexts + context) * alphabet + next]
  std::vector<std::uint64_t> counts(alphabet * contexts * alphabet, 0);
  for (const auto &seq : sequences) {
    if (std::any_of(seq.begin(), seq.end(), [&](Symbol s) { return s >= alphabet; }))
      throw std::invalid_argument("check_markov_property: symbol out of range");
    for (std::size_t t = n + 1; t < seq.size(); ++t) {
      std::size_t ctx = 0;
      for (std::size_t k = t - n; k < t; ++k)
        ctx = ctx * alphabet + seq[k];
      counts[(seq[t - n - 1] * contexts + ctx) * alphabet + seq[t]]++;
    }
  }
  auto row_total = [&](std::size_t e, std::size_t c) {
    std::uint64_t tot = 0;
    for (std::size_t x = 0; x < alphabet; ++x)
      tot += counts[(e * contexts + c) * alphabet + x];
    return tot;
  };

  CheckReport r;
  r.check = "markov-property";
  struct Entry {
    std::size_t c, e1, e2, x;
  };
  std::vector<Entry> entries;
  for (std::size_t c = 0; c < contexts; ++c)
    for (std::size_t e1 = 0; e1 < alphabet; ++e1)
      for (std::size_t e2 = e1 + 1; e2 < alphabet; ++e2)
        if (row_total(e1, c) > 0 && row_total(e2, c) > 0)
          for (std::size_t x = 0; x < alphabet; ++x)
            entries.push_back({c, e1, e2, x});
  const double z = critical_z(policy, entries.size());
  std::uint64_t total = 0;
  for (std::uint64_t v : counts)
    total += v;
  r.samples = total;
  r.tolerances = {{"sigma", policy.sigma}, {"z", z}, {"family", double(entries.size())}};
  for (const Entry &en : entries) {
    const auto n1 = row_total(en.e1, en.c), n2 = row_total(en.e2, en.c);
    const auto k1 = counts[(en.e1 * contexts + en.c) * alphabet + en.x];
    const auto k2 = counts[(en.e2 * contexts + en.c) * alphabet + en.x];
    const double p1 = double(k1) / double(n1), p2 = double(k2) / double(n2);
    const double se = std::hypot(wald_stderr(p1, double(n1)), wald_stderr(p2, double(n2)));
    CheckItem it;
    std::string ctx;
    std::size_t c = en.c;
    for (std::size_t k = 0; k < n; ++k) {
      ctx = std::to_string(c % alphabet) + (ctx.empty() ? "" : ",") + ctx;
      c /= alphabet;
    }
    it.label = "P(next=" + std::to_string(en.x) + " | ctx=" + ctx + ", back=" +
               std::to_string(en.e1) + " vs " + std::to_string(en.e2) + ")";
    it.estimate = p1;
    it.reference = p2;
    it.std_error = se;
    it.tolerance = z * se;
    it.count = k1;
    it.total = n1;
    it.status = std::abs(p1 - p2) <= it.tolerance ? Verdict::pass : Verdict::fail;
    it.witness = it.label;
    r.items.push_back(std::move(it));
  }
  if (entries.empty())
    r.notes.push_back("no context observed with two distinct preceding symbols");
  r.settle();
  return r;
}

} // namespace obsequiv
