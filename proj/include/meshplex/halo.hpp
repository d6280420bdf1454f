#pragma once

#include <algorithm>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "meshplex/error.hpp"
#include "meshplex/partition.hpp"
#include "meshplex/section.hpp"

namespace meshplex {

/// One shared datum: slot `leaf_index` on `leaf_rank` mirrors slot
/// `root_index` on `root_rank`.
struct DataEdge {
  int leaf_rank = 0;
  LocalDof leaf_index = 0;
  int root_rank = 0;
  LocalDof root_index = 0;

  bool operator==(const DataEdge&) const = default;
};

/// Data-layout star forest across simulated ranks. Edges are sorted by
/// (leaf rank, leaf index) and each leaf slot appears once.
struct DataSF {
  std::vector<DataEdge> edges;
};

/// Expands every point-SF leaf into one edge per DoF, pairing the leaf's
/// section range with the root's range in order.
DataSF derive_data_sf(std::span<const PointSF> point_sfs, std::span<const Section> sections);

enum class ReduceOp { Sum, Max, Replace };

/// Throws an integrity error if any edge indexes outside its rank's array.
template <typename T>
void check_sf_bounds(const DataSF& sf, const std::vector<std::vector<T>>& arrays) {
  for (const auto& e : sf.edges) {
    const bool ok = e.leaf_rank >= 0 && static_cast<std::size_t>(e.leaf_rank) < arrays.size() &&
                    e.root_rank >= 0 && static_cast<std::size_t>(e.root_rank) < arrays.size() &&
                    e.leaf_index >= 0 &&
                    static_cast<std::size_t>(e.leaf_index) < arrays[e.leaf_rank].size() &&
                    e.root_index >= 0 &&
                    static_cast<std::size_t>(e.root_index) < arrays[e.root_rank].size();
    if (!ok)
      fail(ErrorCode::Integrity,
           "star forest edge (" + std::to_string(e.leaf_rank) + ":" + std::to_string(e.leaf_index) +
               " <- " + std::to_string(e.root_rank) + ":" + std::to_string(e.root_index) +
               ") is out of bounds");
  }
}

/// Copies every root value into its leaf slots. Roots are read before any
/// leaf is written, so the result does not depend on edge order.
template <typename T>
void sf_broadcast(const DataSF& sf, std::vector<std::vector<T>>& arrays) {
  check_sf_bounds(sf, arrays);
  std::vector<T> values;
  values.reserve(sf.edges.size());
  for (const auto& e : sf.edges) values.push_back(arrays[e.root_rank][e.root_index]);
  for (std::size_t i = 0; i < sf.edges.size(); ++i) {
    const auto& e = sf.edges[i];
    arrays[e.leaf_rank][e.leaf_index] = values[i];
  }
}

/// Folds leaf values into their roots. Contributions to one root are
/// applied in ascending (leaf rank, leaf index) order; leaves are read
/// before any root is written.
template <typename T>
void sf_reduce(const DataSF& sf, std::vector<std::vector<T>>& arrays, ReduceOp op) {
  check_sf_bounds(sf, arrays);
  std::vector<std::size_t> order(sf.edges.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    const auto& x = sf.edges[a];
    const auto& y = sf.edges[b];
    if (x.root_rank != y.root_rank) return x.root_rank < y.root_rank;
    if (x.root_index != y.root_index) return x.root_index < y.root_index;
    if (x.leaf_rank != y.leaf_rank) return x.leaf_rank < y.leaf_rank;
    return x.leaf_index < y.leaf_index;
  });
  std::vector<T> leaf_values;
  leaf_values.reserve(order.size());
  for (std::size_t i : order) leaf_values.push_back(arrays[sf.edges[i].leaf_rank][sf.edges[i].leaf_index]);

  for (std::size_t k = 0; k < order.size();) {
    const auto& first = sf.edges[order[k]];
    std::size_t end = k;
    while (end < order.size() && sf.edges[order[end]].root_rank == first.root_rank &&
           sf.edges[order[end]].root_index == first.root_index)
      ++end;
    T& root = arrays[first.root_rank][first.root_index];
    switch (op) {
    case ReduceOp::Sum:
      for (std::size_t j = k; j < end; ++j) root = root + leaf_values[j];
      break;
    case ReduceOp::Max:
      for (std::size_t j = k; j < end; ++j) root = std::max(root, leaf_values[j]);
      break;
    case ReduceOp::Replace:
      if (end - k > 1)
        fail(ErrorCode::Ambiguity, "replace-reduce into root " + std::to_string(first.root_rank) +
                                       ":" + std::to_string(first.root_index) + " from " +
                                       std::to_string(end - k) + " leaves");
      root = leaf_values[k];
      break;
    }
    k = end;
  }
}

/// Number of leaves attached to every root slot, per rank.
std::vector<std::vector<int>> root_multiplicity(const DataSF& sf,
                                                std::span<const Section> sections);

/// `leaf_rank,leaf_idx,root_rank,root_idx` rows with a header line.
void write_data_sf_csv(const DataSF& sf, std::ostream& out);

} // namespace meshplex
