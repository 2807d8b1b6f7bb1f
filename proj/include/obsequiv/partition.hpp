#ifndef OBSEQUIV_PARTITION_HPP
#define OBSEQUIV_PARTITION_HPP

#include "obsequiv/geometry.hpp"

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace obsequiv {

/// Index into an alphabet of outcome names.
using Symbol = std::uint32_t;

/// Finite coarse-graining of a phase space. Cells are pairwise disjoint and
/// cover the space up to measure zero; this is checked on construction.
/// Positivity of cell measures is checked where a partition is used to observe.
class Partition {
public:
  Partition(PhaseSpacePtr space, std::vector<Region> cells, std::vector<std::string> labels);

  const PhaseSpacePtr &space() const { return space_; }
  const std::vector<Region> &cells() const { return cells_; }
  const std::vector<std::string> &labels() const { return labels_; }
  std::size_t size() const { return cells_.size(); }

  double cell_measure(std::size_t i) const { return space_->measure(cells_[i]); }
  bool nontrivial() const { return cells_.size() >= 2; }

  /// Index of the cell containing p, or size() if p lies in a null gap.
  std::size_t locate(const Point &p) const;

private:
  PhaseSpacePtr space_;
  std::vector<Region> cells_;
  std::vector<std::string> labels_;
};

/// Common refinement a v b. Cells are the positive-measure intersections in
/// (i, j) order, labelled "a_i|b_j".
Partition refine(const Partition &a, const Partition &b);

/// Regular grid partition of the space bounds: `divisions[k]` equal slices
/// along coordinate k, cells in row-major order (last coordinate fastest).
Partition grid_partition(PhaseSpacePtr space, const std::vector<int> &divisions,
                         std::vector<std::string> labels = {});

/// Finite-valued observation function m -> label of the cell containing m.
/// Several cells may carry the same label; the alphabet lists distinct labels
/// in order of first appearance.
class ObservationFunction {
public:
  const Partition &partition() const { return partition_; }
  const std::vector<std::string> &alphabet() const { return alphabet_; }

  Symbol operator()(const Point &p) const;
  Symbol symbol_of_cell(std::size_t cell) const { return cell_symbol_[cell]; }
  /// At least two distinct outcomes.
  bool nontrivial() const { return alphabet_.size() >= 2; }

  friend ObservationFunction observation_from_partition(Partition p,
                                                        std::vector<std::string> labels);

private:
  ObservationFunction(Partition p, std::vector<std::string> alphabet,
                      std::vector<Symbol> cell_symbol);

  Partition partition_;
  std::vector<std::string> alphabet_;
  std::vector<Symbol> cell_symbol_;
};

/// Throws std::invalid_argument on a zero-measure cell or a label count mismatch.
ObservationFunction observation_from_partition(Partition p, std::vector<std::string> labels);

/// Observation using the partition's own labels.
ObservationFunction observation_from_partition(Partition p);

/// Map between alphabets given by name (e.g. a merge map on outcomes).
using SymbolMap = std::map<std::string, std::string>;

} // namespace obsequiv

#endif // OBSEQUIV_PARTITION_HPP
