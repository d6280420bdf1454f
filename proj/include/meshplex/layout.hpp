#pragma once

#include <array>
#include <ostream>
#include <span>
#include <vector>

#include "meshplex/ordering.hpp"
#include "meshplex/partition.hpp"
#include "meshplex/section.hpp"

namespace meshplex {

/// DoFs per entity of a Lagrange simplex element, indexed by depth.
struct DofLayout {
  int dim = 2;
  int degree = 1;
  std::array<int, 4> dofs_per_depth{0, 0, 0, 0};

  /// Sum over the closure of one cell.
  int dofs_per_cell() const;
};

DofLayout lagrange_dof_layout(int dim, int degree);

/// Sizes DoFs by point depth and assigns offsets in permuted point order, so
/// the data layout inherits the class blocks of `perm`.
Section create_section(const Plex& plex, const Permutation& perm, const DofLayout& layout);

/// Inclusive closure of a simplex cell in local numbering order: vertices by
/// ascending `numbering`, then (in 3D) edges by ascending tuple of the
/// vertex positions they do not touch, then facets with facet i opposite
/// vertex i, then the cell itself.
std::vector<Point> ordered_cell_closure(const Plex& plex, Point cell,
                                        std::span<const Point> numbering);

/// Row-per-cell DoF indirection. Rows follow the permuted cell order.
struct CellMap {
  int arity = 0;
  std::vector<Point> cells;
  std::vector<LocalDof> entries;

  std::size_t num_rows() const noexcept { return cells.size(); }
  std::span<const LocalDof> row(std::size_t r) const {
    return std::span<const LocalDof>(entries).subspan(r * static_cast<std::size_t>(arity),
                                                      static_cast<std::size_t>(arity));
  }
  /// Row index of every cell point, -1 for non-cells.
  std::vector<std::int32_t> row_of_point(Point chart_size) const;
};

CellMap cell_node_map(const LocalMesh& local, const Permutation& perm, const Section& section,
                      const DofLayout& layout);

/// One side of a facet: a cell and the facet's position in that cell's
/// ordered closure.
struct FacetSide {
  Point cell = 0;
  int local_facet = 0;
};

struct InteriorFacet {
  Point facet = 0;
  FacetSide plus;
  FacetSide minus;
};

struct ExteriorFacet {
  Point facet = 0;
  FacetSide side;
};

/// Facet-to-cell maps, facets in permuted order. The '+' side of an
/// interior facet is the first cell of its support.
struct FacetMaps {
  std::vector<InteriorFacet> interior;
  std::vector<ExteriorFacet> exterior;
};

FacetMaps facet_maps(const LocalMesh& local, const Permutation& perm);

struct RankLayout {
  const LocalMesh* mesh = nullptr;
  const PointSF* sf = nullptr;
  const Section* section = nullptr;
};

/// Global DoF numbers per rank. Owned DoFs are numbered rank-major in local
/// array order; ghost DoFs receive their owner's number through one star
/// forest broadcast.
std::vector<std::vector<GlobalDof>> global_numbering(std::span<const RankLayout> ranks);

/// One CSV row of DoF indices per cell.
void write_cell_map_csv(const CellMap& map, std::ostream& out);

} // namespace meshplex
