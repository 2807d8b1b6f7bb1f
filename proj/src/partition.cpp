#include "obsequiv/partition.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <unordered_map>

namespace obsequiv {

namespace {

constexpr double kOverlapTolerance = 1e-14;
constexpr double kCoverTolerance = 1e-9;
constexpr double kNullMeasure = 1e-15;

} // namespace

Partition::Partition(PhaseSpacePtr space, std::vector<Region> cells,
                     std::vector<std::string> labels)
    : space_(std::move(space)), cells_(std::move(cells)), labels_(std::move(labels)) {
  if (!space_)
    throw std::invalid_argument("partition: no phase space");
  if (cells_.empty())
    throw std::invalid_argument("partition: at least one cell required");
  if (labels_.empty())
    for (std::size_t i = 0; i < cells_.size(); ++i)
      labels_.push_back("c" + std::to_string(i));
  if (labels_.size() != cells_.size())
    throw std::invalid_argument("partition: label count does not match cell count");

  std::vector<std::pair<std::size_t, const Box *>> boxes;
  for (std::size_t i = 0; i < cells_.size(); ++i)
    for (const Box &b : cells_[i]) {
      if (b.dim() != space_->dim())
        throw std::invalid_argument("partition: cell dimension does not match phase space '" +
                                    space_->name() + "'");
      boxes.emplace_back(i, &b);
    }
  for (std::size_t x = 0; x < boxes.size(); ++x)
    for (std::size_t y = x + 1; y < boxes.size(); ++y)
      if (intersect(*boxes[x].second, *boxes[y].second).volume() > kOverlapTolerance)
        throw std::invalid_argument("partition: cells " + std::to_string(boxes[x].first) +
                                    " and " + std::to_string(boxes[y].first) + " overlap");

  double total = 0.0;
  for (const Region &c : cells_)
    total += space_->measure(c);
  if (std::abs(total - 1.0) > kCoverTolerance)
    throw std::invalid_argument("partition: cells cover measure " + std::to_string(total) +
                                ", expected 1");
}

std::size_t Partition::locate(const Point &p) const {
  for (std::size_t i = 0; i < cells_.size(); ++i)
    if (contains(cells_[i], p))
      return i;
  return cells_.size();
}

Partition refine(const Partition &a, const Partition &b) {
  if (a.space()->name() != b.space()->name() || a.space()->dim() != b.space()->dim())
    throw std::invalid_argument("refine: partitions live on different phase spaces ('" +
                                a.space()->name() + "' vs '" + b.space()->name() + "')");
  std::vector<Region> cells;
  std::vector<std::string> labels;
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) {
      Region r = intersect(a.cells()[i], b.cells()[j]);
      if (r.empty() || a.space()->measure(r) <= kNullMeasure)
        continue;
      cells.push_back(std::move(r));
      labels.push_back(a.labels()[i] + "|" + b.labels()[j]);
    }
  return Partition(a.space(), std::move(cells), std::move(labels));
}

Partition grid_partition(PhaseSpacePtr space, const std::vector<int> &divisions,
                         std::vector<std::string> labels) {
  if (!space)
    throw std::invalid_argument("grid_partition: no phase space");
  const Eigen::Index d = space->dim();
  if (static_cast<Eigen::Index>(divisions.size()) != d)
    throw std::invalid_argument("grid_partition: need one division count per coordinate");
  std::size_t count = 1;
  for (int k : divisions) {
    if (k < 1)
      throw std::invalid_argument("grid_partition: division counts must be positive");
    count *= static_cast<std::size_t>(k);
  }
  const Box &bounds = space->bounds();
  std::vector<Region> cells;
  cells.reserve(count);
  std::vector<int> index(divisions.size(), 0);
  for (std::size_t c = 0; c < count; ++c) {
    std::size_t rest = c;
    for (Eigen::Index k = d - 1; k >= 0; --k) {
      index[k] = static_cast<int>(rest % divisions[k]);
      rest /= divisions[k];
    }
    Point lo(d), hi(d);
    for (Eigen::Index k = 0; k < d; ++k) {
      const double width = (bounds.hi[k] - bounds.lo[k]) / divisions[k];
      lo[k] = bounds.lo[k] + index[k] * width;
      hi[k] = index[k] + 1 == divisions[k] ? bounds.hi[k] : bounds.lo[k] + (index[k] + 1) * width;
    }
    cells.push_back(Region{Box(lo, hi)});
  }
  return Partition(std::move(space), std::move(cells), std::move(labels));
}

ObservationFunction::ObservationFunction(Partition p, std::vector<std::string> alphabet,
                                         std::vector<Symbol> cell_symbol)
    : partition_(std::move(p)), alphabet_(std::move(alphabet)),
      cell_symbol_(std::move(cell_symbol)) {}

Symbol ObservationFunction::operator()(const Point &p) const {
  const std::size_t cell = partition_.locate(p);
  // Points in uncovered null sets are assigned the first cell's outcome.
  return cell < cell_symbol_.size() ? cell_symbol_[cell] : cell_symbol_.front();
}

ObservationFunction observation_from_partition(Partition p, std::vector<std::string> labels) {
  if (labels.size() != p.size())
    throw std::invalid_argument("observation: " + std::to_string(labels.size()) +
                                " labels for " + std::to_string(p.size()) + " cells");
  for (std::size_t i = 0; i < p.size(); ++i)
    if (p.cell_measure(i) <= kNullMeasure)
      throw std::invalid_argument("observation: cell " + std::to_string(i) + " ('" +
                                  labels[i] + "') has zero measure and cannot be seen");
  std::vector<std::string> alphabet;
  std::unordered_map<std::string, Symbol> index;
  std::vector<Symbol> cell_symbol;
  for (const std::string &l : labels) {
    auto [it, inserted] = index.emplace(l, static_cast<Symbol>(alphabet.size()));
    if (inserted)
      alphabet.push_back(l);
    cell_symbol.push_back(it->second);
  }
  return ObservationFunction(std::move(p), std::move(alphabet), std::move(cell_symbol));
}

ObservationFunction observation_from_partition(Partition p) {
  std::vector<std::string> labels = p.labels();
  return observation_from_partition(std::move(p), std::move(labels));
}

} // namespace obsequiv
