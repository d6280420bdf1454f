#pragma once

#include <cstdint>
#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <set>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "meshplex/layout.hpp"
#include "meshplex/section.hpp"

namespace meshplex {

/// CSR index structure of an assembled matrix; columns sorted and unique
/// within each row.
struct SparsityPattern {
  GlobalDof n = 0;
  std::vector<std::int64_t> row_starts{0};
  std::vector<GlobalDof> col_indices;

  std::int64_t nnz() const noexcept { return static_cast<std::int64_t>(col_indices.size()); }
  std::span<const GlobalDof> row(GlobalDof i) const {
    const auto b = static_cast<std::size_t>(row_starts[static_cast<std::size_t>(i)]);
    const auto e = static_cast<std::size_t>(row_starts[static_cast<std::size_t>(i) + 1]);
    return std::span<const GlobalDof>(col_indices).subspan(b, e - b);
  }
  bool contains(GlobalDof i, GlobalDof j) const;

  static SparsityPattern from_entries(GlobalDof n, std::vector<std::pair<GlobalDof, GlobalDof>> entries);
  static SparsityPattern identity(GlobalDof n);
};

/// Couples every pair of global DoFs that share a cell on any rank.
SparsityPattern build_sparsity(std::span<const CellMap> cell_maps,
                               std::span<const std::vector<GlobalDof>> global_numbers, GlobalDof n);

struct OrderingReport {
  std::int64_t bandwidth = 0;
  std::int64_t profile = 0;
  std::int64_t nnz = 0;
  /// Wall-clock seconds per loop variant.
  std::map<std::string, double> timings;
};

/// Bandwidth is max |i - j| over the nonzeros; profile sums, over
/// nonempty rows, the distance from the diagonal to the leftmost column.
OrderingReport metrics(const SparsityPattern& pattern);

/// JSON object with keys bandwidth, profile, nnz and timings.
std::string to_json(const OrderingReport& report);

/// Pixels per side of the portrait of an n x n pattern: n itself up to
/// 10000, otherwise n max-pooled into blocks of ceil(n / 10000).
std::int64_t portrait_size(GlobalDof n);

/// Binary PBM (P4); black marks a nonzero.
void write_portrait_pbm(const SparsityPattern& pattern, std::ostream& out);

/// Binary PGM (P5) with three levels: black nonzeros, grey lines at the
/// given rank boundaries, white elsewhere.
void write_portrait_pgm(const SparsityPattern& pattern, std::span<const GlobalDof> rank_bounds,
                        std::ostream& out);

/// Writes the PBM portrait, or the PGM variant when boundaries are given.
void write_portrait(const SparsityPattern& pattern, std::ostream& out,
                    std::optional<std::span<const GlobalDof>> rank_bounds = std::nullopt);

/// Black pixels of a P4 image as (row, column) pairs.
std::set<std::pair<std::int64_t, std::int64_t>> read_portrait_pbm(std::istream& in);

struct BenchResult {
  std::vector<double> values;
  double seconds = 0.0;
};

/// Mass-assembly-shaped loop over the cells of `map`: gather the cell's
/// DoF values, sum and scale by `weight`, scatter-add the result to each of
/// the cell's DoFs. One untimed warm-up pass precedes `repeats` timed
/// passes; `values` accumulates the timed passes only.
BenchResult bench_cell_loop(const CellMap& map, std::span<const double> data, int repeats,
                            double weight = 1.0);

/// The same kernel over interior facets, reading the '+' side cell.
BenchResult bench_facet_loop(std::span<const InteriorFacet> facets, const CellMap& map,
                             std::span<const double> data, int repeats, double weight = 1.0);

} // namespace meshplex
