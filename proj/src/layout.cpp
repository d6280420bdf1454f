#include "meshplex/layout.hpp"

#include <algorithm>
#include <string>

#include "meshplex/error.hpp"
#include "meshplex/halo.hpp"

namespace meshplex {

namespace {

int binomial(int n, int k) {
  if (k < 0 || k > n) return 0;
  int r = 1;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

} // namespace

int DofLayout::dofs_per_cell() const {
  int total = 0;
  // A d-simplex has binomial(d+1, k+1) faces of dimension k
  for (int k = 0; k <= dim; ++k) total += binomial(dim + 1, k + 1) * dofs_per_depth[static_cast<std::size_t>(k)];
  return total;
}

DofLayout lagrange_dof_layout(int dim, int degree) {
  require(dim == 2 || dim == 3, ErrorCode::Argument,
          "Lagrange layouts exist for dimension 2 and 3, not " + std::to_string(dim));
  require(degree >= 1 && degree <= 3, ErrorCode::Argument,
          "supported Lagrange degrees are 1 to 3, not " + std::to_string(degree));
  DofLayout layout;
  layout.dim = dim;
  layout.degree = degree;
  const int p = degree;
  layout.dofs_per_depth[0] = 1;
  layout.dofs_per_depth[1] = p - 1;
  layout.dofs_per_depth[2] = (p - 1) * (p - 2) / 2;
  layout.dofs_per_depth[3] = dim == 3 ? (p - 1) * (p - 2) * (p - 3) / 6 : 0;
  return layout;
}

Section create_section(const Plex& plex, const Permutation& perm, const DofLayout& layout) {
  require(plex.max_depth() == layout.dim, ErrorCode::Argument,
          "layout dimension " + std::to_string(layout.dim) + " does not match mesh dimension " +
              std::to_string(plex.max_depth()));
  check_bijection(perm.new_of_old, plex.chart_size());

  Section section;
  const auto n = static_cast<std::size_t>(plex.chart_size());
  section.dof_count.resize(n);
  section.offset.resize(n);
  for (std::size_t p = 0; p < n; ++p)
    section.dof_count[p] = layout.dofs_per_depth[static_cast<std::size_t>(plex.depth(static_cast<Point>(p)))];
  LocalDof running = 0;
  for (Point p : perm.old_of_new()) {
    section.offset[static_cast<std::size_t>(p)] = running;
    running += section.dof_count[static_cast<std::size_t>(p)];
  }
  section.total_size = running;
  return section;
}

std::vector<Point> ordered_cell_closure(const Plex& plex, Point cell,
                                        std::span<const Point> numbering) {
  const int dim = plex.max_depth();
  require(plex.depth(cell) == dim, ErrorCode::Argument,
          "point " + std::to_string(cell) + " is not a cell");
  require(numbering.size() == static_cast<std::size_t>(plex.chart_size()), ErrorCode::Argument,
          "vertex numbering does not cover the chart");
  require(dim == 2 || dim == 3, ErrorCode::Topology,
          "local numbering is defined for triangles and tetrahedra only");

  std::vector<Point> vertices, edges, facets;
  for (Point q : plex.closure(cell)) {
    const int d = plex.depth(q);
    if (d == 0) vertices.push_back(q);
    else if (d == dim - 1) facets.push_back(q);
    else edges.push_back(q);
  }
  const auto nv = static_cast<std::size_t>(dim + 1);
  const std::size_t ne = dim == 3 ? 6 : 0;
  if (vertices.size() != nv || facets.size() != nv || edges.size() != ne)
    fail(ErrorCode::Topology, "closure of cell " + std::to_string(cell) + " is not a simplex (" +
                                  std::to_string(vertices.size()) + " vertices, " +
                                  std::to_string(facets.size()) + " facets)");

  std::sort(vertices.begin(), vertices.end(), [&](Point a, Point b) {
    return numbering[static_cast<std::size_t>(a)] < numbering[static_cast<std::size_t>(b)];
  });
  auto local_index = [&](Point v) {
    return static_cast<int>(std::find(vertices.begin(), vertices.end(), v) - vertices.begin());
  };
  // Sort key: ascending local indices of the cell vertices the entity misses
  auto missing_key = [&](Point entity) {
    std::vector<char> touches(nv, 0);
    for (Point q : plex.closure(entity))
      if (plex.depth(q) == 0) touches[static_cast<std::size_t>(local_index(q))] = 1;
    std::vector<int> key;
    for (std::size_t i = 0; i < nv; ++i)
      if (!touches[i]) key.push_back(static_cast<int>(i));
    return key;
  };
  auto sort_by_missing = [&](std::vector<Point>& entities) {
    std::vector<std::pair<std::vector<int>, Point>> keyed;
    for (Point e : entities) keyed.emplace_back(missing_key(e), e);
    std::sort(keyed.begin(), keyed.end());
    for (std::size_t i = 0; i < entities.size(); ++i) entities[i] = keyed[i].second;
  };
  sort_by_missing(edges);
  sort_by_missing(facets);

  std::vector<Point> out;
  out.reserve(vertices.size() + edges.size() + facets.size() + 1);
  out.insert(out.end(), vertices.begin(), vertices.end());
  out.insert(out.end(), edges.begin(), edges.end());
  out.insert(out.end(), facets.begin(), facets.end());
  out.push_back(cell);
  return out;
}

std::vector<std::int32_t> CellMap::row_of_point(Point chart_size) const {
  std::vector<std::int32_t> rows(static_cast<std::size_t>(chart_size), -1);
  for (std::size_t r = 0; r < cells.size(); ++r) rows[static_cast<std::size_t>(cells[r])] = static_cast<std::int32_t>(r);
  return rows;
}

namespace {

std::vector<Point> cells_in_permuted_order(const Plex& plex, const Permutation& perm) {
  std::vector<Point> cells;
  for (Point c : plex.cells()) cells.push_back(c);
  std::sort(cells.begin(), cells.end(), [&](Point a, Point b) {
    return perm.new_of_old[static_cast<std::size_t>(a)] < perm.new_of_old[static_cast<std::size_t>(b)];
  });
  return cells;
}

} // namespace

CellMap cell_node_map(const LocalMesh& local, const Permutation& perm, const Section& section,
                      const DofLayout& layout) {
  const Plex& plex = local.plex;
  require(section.chart_size() == plex.chart_size() && perm.size() == plex.chart_size(),
          ErrorCode::Integrity, "section, permutation and plex charts differ");
  CellMap map;
  map.arity = layout.dofs_per_cell();
  map.cells = cells_in_permuted_order(plex, perm);
  map.entries.reserve(map.cells.size() * static_cast<std::size_t>(map.arity));
  for (Point c : map.cells) {
    const std::size_t before = map.entries.size();
    for (Point q : ordered_cell_closure(plex, c, perm.new_of_old))
      for (LocalDof k = 0; k < section.count(q); ++k) map.entries.push_back(section.start(q) + k);
    if (map.entries.size() - before != static_cast<std::size_t>(map.arity))
      fail(ErrorCode::Integrity, "cell " + std::to_string(c) + " collects " +
                                     std::to_string(map.entries.size() - before) +
                                     " DoFs from the section, layout expects " +
                                     std::to_string(map.arity));
  }
  return map;
}

FacetMaps facet_maps(const LocalMesh& local, const Permutation& perm) {
  const Plex& plex = local.plex;
  require(perm.size() == plex.chart_size(), ErrorCode::Integrity,
          "permutation and plex charts differ");
  const int dim = plex.max_depth();
  const std::size_t first_facet = static_cast<std::size_t>(dim + 1) + (dim == 3 ? 6 : 0);

  auto side = [&](Point cell, Point facet) {
    const auto closure = ordered_cell_closure(plex, cell, perm.new_of_old);
    for (std::size_t i = first_facet; i + 1 < closure.size(); ++i)
      if (closure[i] == facet) return FacetSide{cell, static_cast<int>(i - first_facet)};
    fail(ErrorCode::Topology, "facet " + std::to_string(facet) + " missing from cell " +
                                  std::to_string(cell));
  };

  std::vector<Point> facets;
  for (Point f : plex.height_stratum(1)) facets.push_back(f);
  std::sort(facets.begin(), facets.end(), [&](Point a, Point b) {
    return perm.new_of_old[static_cast<std::size_t>(a)] < perm.new_of_old[static_cast<std::size_t>(b)];
  });

  FacetMaps maps;
  for (Point f : facets) {
    auto sup = plex.support(f);
    if (sup.size() == 2) maps.interior.push_back({f, side(sup[0], f), side(sup[1], f)});
    else if (sup.size() == 1) maps.exterior.push_back({f, side(sup[0], f)});
    else
      fail(ErrorCode::Topology, "facet " + std::to_string(f) + " has " +
                                    std::to_string(sup.size()) + " cells in its support");
  }
  return maps;
}

std::vector<std::vector<GlobalDof>> global_numbering(std::span<const RankLayout> ranks) {
  std::vector<PointSF> sfs;
  std::vector<Section> sections;
  std::vector<GlobalDof> owned(ranks.size(), 0);
  for (std::size_t r = 0; r < ranks.size(); ++r) {
    const auto& rk = ranks[r];
    require(rk.mesh && rk.sf && rk.section, ErrorCode::Argument, "incomplete rank layout");
    require(rk.section->chart_size() == rk.mesh->plex.chart_size(), ErrorCode::Integrity,
            "section chart differs from plex on rank " + std::to_string(r));
    for (Point p = 0; p < rk.mesh->plex.chart_size(); ++p)
      if (rk.mesh->owns(p)) owned[r] += rk.section->count(p);
    sfs.push_back(*rk.sf);
    sections.push_back(*rk.section);
  }

  std::vector<std::vector<GlobalDof>> global(ranks.size());
  GlobalDof base = 0;
  for (std::size_t r = 0; r < ranks.size(); ++r) {
    const auto& mesh = *ranks[r].mesh;
    const auto& sec = *ranks[r].section;
    global[r].assign(static_cast<std::size_t>(sec.total_size), -1);
    std::vector<Point> points;
    for (Point p = 0; p < mesh.plex.chart_size(); ++p)
      if (mesh.owns(p) && sec.count(p) > 0) points.push_back(p);
    std::sort(points.begin(), points.end(), [&](Point a, Point b) { return sec.start(a) < sec.start(b); });
    GlobalDof next = base;
    for (Point p : points)
      for (LocalDof k = 0; k < sec.count(p); ++k) global[r][static_cast<std::size_t>(sec.start(p) + k)] = next++;
    base = next;
  }

  const DataSF sf = derive_data_sf(sfs, sections);
  sf_broadcast(sf, global);
  for (std::size_t r = 0; r < global.size(); ++r)
    for (std::size_t i = 0; i < global[r].size(); ++i)
      if (global[r][i] < 0)
        fail(ErrorCode::Integrity, "DoF " + std::to_string(i) + " on rank " + std::to_string(r) +
                                       " has no owner-assigned global number");
  return global;
}

void write_cell_map_csv(const CellMap& map, std::ostream& out) {
  for (std::size_t r = 0; r < map.num_rows(); ++r) {
    auto row = map.row(r);
    for (std::size_t k = 0; k < row.size(); ++k) out << (k ? "," : "") << row[k];
    out << '\n';
  }
  if (!out) fail(ErrorCode::Io, "failed to write cell map CSV");
}

} // namespace meshplex
