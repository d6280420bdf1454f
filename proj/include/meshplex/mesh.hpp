#pragma once

#include <array>
#include <istream>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "meshplex/plex.hpp"

namespace meshplex {

/// Name of the label carrying boundary side ids and Gmsh physical tags.
inline constexpr std::string_view kBoundaryLabel = "boundary";

/// Side ids assigned by the unit-square generator.
enum BoundarySide : int { kLeft = 1, kRight = 2, kBottom = 3, kTop = 4 };

/// A plex together with vertex coordinates.
struct MeshGeometry {
  Plex plex;
  int cell_dimension = 0;
  int geometric_dimension = 0;
  /// Row-major, `geometric_dimension` values per vertex in depth-0 stratum order.
  std::vector<double> coordinates;

  std::span<const double> vertex_coordinates(Point vertex) const;
  const Label& boundary_labels() const;
};

/// Builds an interpolated simplex plex from cell-to-vertex incidence.
///
/// The chart is laid out as cells, vertices, then the remaining strata from
/// the facets down to the edges. Edges and facets are keyed by their sorted
/// vertex set and numbered in first-encounter order over a sweep of the
/// cells in input order. Vertex `v` of the input becomes point
/// `num_cells + v`.
Plex interpolate_simplices(int cell_dimension, Point num_vertices,
                           std::span<const std::vector<Point>> cell_vertices);

/// Structured triangulation of [0,1]^2 with nx*ny quads, each split along
/// its lower-left to upper-right diagonal. Boundary edges are labelled
/// 1=left, 2=right, 3=bottom, 4=top.
MeshGeometry unit_square_mesh(int nx, int ny);

/// The single tetrahedron with the canonical 15-point numbering: cell 0,
/// vertices 1-4, facets 5-8, edges 9-14.
MeshGeometry reference_tet();

/// Reads a Gmsh MSH 2.2 ASCII stream. Supports 2-node lines, 3-node
/// triangles, 4-node tetrahedra and point elements. Physical tags of
/// boundary-dimension elements are recorded in the boundary label.
MeshGeometry read_gmsh(std::istream& in);
MeshGeometry read_gmsh_file(const std::string& path);

/// Mesh source mini-language: `square:NxM`, `tet:reference`, or a path
/// ending in `.msh`.
MeshGeometry mesh_from_source(std::string_view source);

/// Number of points in each depth, indexed by depth.
std::vector<Point> stratum_sizes(const Plex& plex);

/// Alternating sum of stratum sizes, V - E + F (- C).
long euler_characteristic(const Plex& plex);

} // namespace meshplex
