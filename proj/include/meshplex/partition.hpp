#pragma once

#include <cstdint>
#include <istream>
#include <ostream>
#include <vector>

#include "meshplex/mesh.hpp"
#include "meshplex/plex.hpp"

namespace meshplex {

/// Owner rank of every cell of a global mesh.
struct PartitionMap {
  std::vector<int> cell_owner;
  int num_ranks = 1;

  std::vector<Point> cells_of(int rank) const;
};

/// Entity classes that separate halo-independent work from halo-dependent
/// work. Non-owned data is always last.
enum class EntityClass : int { Core = 0, NonCore = 1, Halo = 2 };

inline constexpr std::string_view kClassLabel = "entity_class";

const char* to_string(EntityClass c) noexcept;

/// One shared point: the local copy `leaf` mirrors point `root` on `root_rank`.
struct SfLeaf {
  Point leaf = 0;
  int root_rank = 0;
  Point root = 0;

  bool operator==(const SfLeaf&) const = default;
};

/// Point star forest of one rank, leaves sorted by local point.
struct PointSF {
  std::vector<SfLeaf> leaves;
};

/// The part of a global mesh visible to one rank.
struct LocalMesh {
  int rank = 0;
  int num_ranks = 1;
  Plex plex;
  /// Local point -> global point.
  std::vector<Point> l2g;
  /// Local point -> owning rank.
  std::vector<int> point_owner;
  /// Entity classes, filled by mark_entity_classes.
  Label classes{std::string(kClassLabel)};

  bool owns(Point p) const { return point_owner.at(static_cast<std::size_t>(p)) == rank; }
  EntityClass entity_class(Point p) const;
};

struct DistributedRank {
  LocalMesh mesh;
  PointSF sf;
};

/// Greedy breadth-first partition of the facet-dual graph into `k` parts.
///
/// Seeds are chosen by farthest-cell selection: the first is the cell
/// farthest from cell 0, each later one the cell farthest from the seeds
/// already chosen (ties by lowest id). Regions then grow breadth-first in
/// turn, one cell per region per turn and neighbours in ascending id, up to
/// ceil(cells / k) cells each. Cells left over join the smallest
/// neighbouring region. Every cell joins the region of an adjacent cell, so
/// regions are connected whenever the dual graph is.
PartitionMap partition(const MeshGeometry& mesh, int k);

/// Owning rank of every global point: the lowest rank owning a cell in the
/// point's star.
std::vector<int> point_owners(const Plex& plex, const PartitionMap& part);

/// Splits a mesh into rank-local plexes. Each rank receives the closure of
/// its owned cells plus `overlap` layers of vertex-adjacent ghost cells.
/// Local points keep the relative order of their global ids, so strata stay
/// contiguous.
std::vector<DistributedRank> distribute(const MeshGeometry& mesh, const PartitionMap& part,
                                        int overlap = 1);

/// Classifies every local point as core, non-core or halo.
///
/// Halo points are the star forest leaves. Owned cells sharing a point with
/// a halo cell are non-core, the rest core. An owned
/// point below the cells is non-core when any cell in its star is halo or
/// non-core, and core otherwise.
Label mark_entity_classes(const LocalMesh& local, const PointSF& sf);

/// `cell_id,rank` lines with a header row.
void write_partition_csv(const PartitionMap& part, std::ostream& out);
PartitionMap read_partition_csv(std::istream& in);

} // namespace meshplex
