#pragma once

#include <cstdint>
#include <vector>

#include "meshplex/plex.hpp"

namespace meshplex {

/// Index of a DoF in a rank-local data array.
using LocalDof = std::int32_t;
/// Index of a DoF in the assembled global numbering.
using GlobalDof = std::int64_t;

/// CSR-style map from points to ranges of a data array. Ranges tile
/// [0, total_size) and are laid out in the order of the attached permutation.
struct Section {
  std::vector<LocalDof> dof_count;
  std::vector<LocalDof> offset;
  LocalDof total_size = 0;

  Point chart_size() const noexcept { return static_cast<Point>(dof_count.size()); }
  LocalDof count(Point p) const { return dof_count.at(static_cast<std::size_t>(p)); }
  LocalDof start(Point p) const { return offset.at(static_cast<std::size_t>(p)); }
};

} // namespace meshplex
