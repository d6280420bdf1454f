#pragma once

#include <algorithm>
#include <bitset>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "meshplex/pipeline.hpp"

namespace mptest {

using namespace meshplex;

inline std::string data_path(const std::string& name) { return std::string(MESHPLEX_TEST_DATA) + "/" + name; }

struct NamedMesh {
  std::string name;
  MeshGeometry mesh;
};

/// Unit cube split into the six Kuhn tetrahedra around the main diagonal.
inline MeshGeometry kuhn_cube() {
  MeshGeometry m;
  const int axes[6][3] = {{1, 2, 4}, {1, 4, 2}, {2, 1, 4}, {2, 4, 1}, {4, 1, 2}, {4, 2, 1}};
  std::vector<std::vector<Point>> cells;
  for (const auto& a : axes) cells.push_back({0, a[0], a[0] + a[1], 7});
  m.plex = interpolate_simplices(3, 8, cells);
  m.cell_dimension = 3;
  m.geometric_dimension = 3;
  for (int v = 0; v < 8; ++v)
    for (int bit : {1, 2, 4}) m.coordinates.push_back((v & bit) ? 1.0 : 0.0);
  return m;
}

/// Every mesh the property suites sweep over.
inline std::vector<NamedMesh> test_meshes() {
  std::vector<NamedMesh> out;
  out.push_back({"tet:reference", reference_tet()});
  for (int n = 1; n <= 8; ++n) out.push_back({"square:" + std::to_string(n), unit_square_mesh(n, n)});
  out.push_back({"square:5x1", unit_square_mesh(5, 1)});
  out.push_back({"square:3x7", unit_square_mesh(3, 7)});
  out.push_back({"kuhn_cube", kuhn_cube()});
  for (const char* f : {"two_triangles.msh", "one_tet.msh", "tagged_square.msh"})
    out.push_back({f, read_gmsh_file(data_path(f))});
  return out;
}

/// Reachability in the cone digraph by Warshall's algorithm on the stored
/// cone lists, independent of the traversal code. below_[p][q] means q is
/// below p.
class Reachability {
public:
  static constexpr std::size_t kMax = 512;

  explicit Reachability(const Plex& plex) : n_(static_cast<std::size_t>(plex.chart_size())) {
    if (n_ > kMax) throw std::length_error("reachability oracle limited to 512 points");
    below_.resize(n_);
    const auto cones = plex.cone_lists();
    for (std::size_t p = 0; p < n_; ++p)
      for (Point q : cones[p]) below_[p].set(static_cast<std::size_t>(q));
    for (std::size_t k = 0; k < n_; ++k)
      for (std::size_t i = 0; i < n_; ++i)
        if (below_[i][k]) below_[i] |= below_[k];
  }

  std::vector<Point> closure(Point p) const {
    std::vector<Point> out;
    for (std::size_t q = 0; q < n_; ++q)
      if (below_[static_cast<std::size_t>(p)][q]) out.push_back(static_cast<Point>(q));
    return out;
  }

  std::vector<Point> star(Point p) const {
    std::vector<Point> out;
    for (std::size_t q = 0; q < n_; ++q)
      if (below_[q][static_cast<std::size_t>(p)]) out.push_back(static_cast<Point>(q));
    return out;
  }

private:
  std::size_t n_;
  std::vector<std::bitset<kMax>> below_;
};

/// Vertex points of a point's closure.
inline std::set<Point> vertex_set(const Plex& plex, Point p) {
  std::set<Point> out;
  for (Point q : plex.closure(p, true))
    if (plex.depth(q) == 0) out.insert(q);
  return out;
}

/// Cell ids of one class on one rank, mapped back to global ids.
inline std::vector<Point> global_cells_of_class(const LocalMesh& m, EntityClass c) {
  std::vector<Point> out;
  for (Point p : m.plex.cells())
    if (m.entity_class(p) == c) out.push_back(m.l2g[static_cast<std::size_t>(p)]);
  std::sort(out.begin(), out.end());
  return out;
}

/// Distributed mesh with classes marked, as the pipeline prepares it.
inline std::vector<DistributedRank> distribute_marked(const MeshGeometry& mesh, int k, int overlap = 1) {
  auto ranks = distribute(mesh, partition(mesh, k), overlap);
  for (auto& r : ranks) r.mesh.classes = mark_entity_classes(r.mesh, r.sf);
  return ranks;
}

/// Global cell ids per class for unit_square_mesh(4,4), 2 parts, overlap 1,
/// enumerated by tests/oracles/oracle.py from the marking rules.
struct ClassFixture {
  std::vector<Point> core, non_core, halo;
};
inline const ClassFixture kSquare4ClassesRank0{{9, 16, 17, 19, 24, 25, 26, 27, 29},
                                     {1, 8, 11, 18, 21, 28, 31},
                                     {0, 3, 10, 13, 20, 23, 30}};
inline const ClassFixture kSquare4ClassesRank1{{2, 4, 5, 6, 7, 12, 14, 15, 22},
                                     {0, 3, 10, 13, 20, 23, 30},
                                     {1, 8, 11, 18, 21, 28, 31}};

/// Ordered closure of the reference tetrahedron under the identity numbering.
inline const std::vector<Point> kRefTetClosureOrder{1, 2, 3, 4, 12, 14, 9, 13, 10, 11, 8, 6, 7, 5, 0};

/// Compact permutation of unit_square_mesh(1,1), one rank, identity cell order.
inline const std::vector<Point> kTwoTriangleCompact{0, 7, 1, 2, 8, 3, 4, 5, 6, 9, 10};

} // namespace mptest
