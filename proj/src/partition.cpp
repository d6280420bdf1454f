#include "meshplex/partition.hpp"

#include <algorithm>
#include <deque>
#include <limits>
#include <sstream>
#include <string>

#include "meshplex/error.hpp"

namespace meshplex {

const char* to_string(EntityClass c) noexcept {
  switch (c) {
  case EntityClass::Core: return "core";
  case EntityClass::NonCore: return "non_core";
  case EntityClass::Halo: return "halo";
  }
  return "?";
}

std::vector<Point> PartitionMap::cells_of(int rank) const {
  std::vector<Point> cells;
  for (std::size_t c = 0; c < cell_owner.size(); ++c)
    if (cell_owner[c] == rank) cells.push_back(static_cast<Point>(c));
  return cells;
}

EntityClass LocalMesh::entity_class(Point p) const {
  auto v = classes.value(p);
  if (!v) fail(ErrorCode::Precondition, "point " + std::to_string(p) + " has no entity class");
  return static_cast<EntityClass>(*v);
}

namespace {

// Cells sharing a facet, ascending, indexed by cell offset in the stratum.
std::vector<std::vector<Point>> facet_dual_graph(const Plex& plex) {
  const PointRange cells = plex.cells();
  std::vector<std::vector<Point>> graph(static_cast<std::size_t>(cells.size()));
  if (plex.max_depth() == 0) return graph;
  for (Point f : plex.height_stratum(1)) {
    auto sup = plex.support(f);
    for (Point a : sup)
      for (Point b : sup)
        if (a != b) graph[static_cast<std::size_t>(a - cells.start)].push_back(b - cells.start);
  }
  for (auto& nbrs : graph) {
    std::sort(nbrs.begin(), nbrs.end());
    nbrs.erase(std::unique(nbrs.begin(), nbrs.end()), nbrs.end());
  }
  return graph;
}

} // namespace

PartitionMap partition(const MeshGeometry& mesh, int k) {
  const Plex& plex = mesh.plex;
  const Point nc = plex.chart_size() == 0 ? 0 : plex.cells().size();
  require(k >= 1 && k <= nc, ErrorCode::Argument,
          "number of parts " + std::to_string(k) + " must lie in [1, " + std::to_string(nc) + "]");

  const auto graph = facet_dual_graph(plex);
  const auto n = static_cast<std::size_t>(nc);
  const auto ranks = static_cast<std::size_t>(k);
  constexpr int kUnassigned = -1;
  constexpr Point kInf = std::numeric_limits<Point>::max();

  PartitionMap part;
  part.num_ranks = k;
  part.cell_owner.assign(n, kUnassigned);

  // Seeds by farthest-cell selection: the first is farthest from cell 0,
  // each later one farthest from the seeds chosen so far
  std::vector<Point> seeds;
  std::vector<Point> dist(n, kInf);
  for (std::size_t r = 0; r < ranks; ++r) {
    std::fill(dist.begin(), dist.end(), kInf);
    std::deque<Point> queue;
    if (seeds.empty()) queue.push_back(0);
    for (Point s : seeds) queue.push_back(s);
    for (Point s : queue) dist[static_cast<std::size_t>(s)] = 0;
    while (!queue.empty()) {
      const Point c = queue.front();
      queue.pop_front();
      for (Point nb : graph[static_cast<std::size_t>(c)])
        if (dist[static_cast<std::size_t>(nb)] == kInf) {
          dist[static_cast<std::size_t>(nb)] = dist[static_cast<std::size_t>(c)] + 1;
          queue.push_back(nb);
        }
    }
    Point seed = -1;
    for (std::size_t c = 0; c < n; ++c)
      if (part.cell_owner[c] == kUnassigned && (seed < 0 || dist[c] > dist[static_cast<std::size_t>(seed)]))
        seed = static_cast<Point>(c);
    seeds.push_back(seed);
    part.cell_owner[static_cast<std::size_t>(seed)] = static_cast<int>(r);
  }

  // Round-robin breadth-first growth, one cell per region per turn
  const std::size_t target = (n + ranks - 1) / ranks;
  std::vector<std::size_t> size(ranks, 1);
  std::vector<std::deque<Point>> frontier(ranks);
  for (std::size_t r = 0; r < ranks; ++r) frontier[r].push_back(seeds[r]);
  for (bool grew = true; grew;) {
    grew = false;
    for (std::size_t r = 0; r < ranks; ++r) {
      if (size[r] >= target) continue;
      auto& queue = frontier[r];
      while (!queue.empty()) {
        const auto& nbrs = graph[static_cast<std::size_t>(queue.front())];
        auto it = std::find_if(nbrs.begin(), nbrs.end(), [&](Point nb) {
          return part.cell_owner[static_cast<std::size_t>(nb)] == kUnassigned;
        });
        if (it == nbrs.end()) {
          queue.pop_front();
          continue;
        }
        part.cell_owner[static_cast<std::size_t>(*it)] = static_cast<int>(r);
        ++size[r];
        queue.push_back(*it);
        grew = true;
        break;
      }
    }
  }

  // Cells no region could take join the smallest neighbouring region
  auto smallest = [&](auto&& candidates) {
    int best = -1;
    for (int r : candidates)
      if (r >= 0 && (best < 0 || size[static_cast<std::size_t>(r)] < size[static_cast<std::size_t>(best)] ||
                     (size[static_cast<std::size_t>(r)] == size[static_cast<std::size_t>(best)] && r < best)))
        best = r;
    return best;
  };
  for (std::size_t left = static_cast<std::size_t>(std::count(part.cell_owner.begin(), part.cell_owner.end(), kUnassigned));
       left > 0;) {
    bool placed = false;
    for (std::size_t c = 0; c < n; ++c) {
      if (part.cell_owner[c] != kUnassigned) continue;
      std::vector<int> owners;
      for (Point nb : graph[c]) owners.push_back(part.cell_owner[static_cast<std::size_t>(nb)]);
      const int r = smallest(owners);
      if (r < 0) continue;
      part.cell_owner[c] = r;
      ++size[static_cast<std::size_t>(r)];
      --left;
      placed = true;
    }
    if (placed) continue;
    // Only reachable on a disconnected dual graph
    std::vector<int> all(ranks);
    for (std::size_t r = 0; r < ranks; ++r) all[r] = static_cast<int>(r);
    const int r = smallest(all);
    const auto c = static_cast<std::size_t>(
        std::find(part.cell_owner.begin(), part.cell_owner.end(), kUnassigned) - part.cell_owner.begin());
    part.cell_owner[c] = r;
    ++size[static_cast<std::size_t>(r)];
    --left;
  }
  return part;
}

std::vector<int> point_owners(const Plex& plex, const PartitionMap& part) {
  const PointRange cells = plex.cells();
  require(part.cell_owner.size() == static_cast<std::size_t>(cells.size()), ErrorCode::Integrity,
          "partition covers " + std::to_string(part.cell_owner.size()) + " cells, mesh has " +
              std::to_string(cells.size()));
  for (std::size_t c = 0; c < part.cell_owner.size(); ++c)
    require(part.cell_owner[c] >= 0 && part.cell_owner[c] < part.num_ranks, ErrorCode::Integrity,
            "cell " + std::to_string(c) + " has invalid owner " + std::to_string(part.cell_owner[c]));

  std::vector<int> owner(static_cast<std::size_t>(plex.chart_size()), std::numeric_limits<int>::max());
  for (Point c : cells) {
    const int r = part.cell_owner[static_cast<std::size_t>(c - cells.start)];
    for (Point q : plex.closure(c, true)) {
      auto& o = owner[static_cast<std::size_t>(q)];
      o = std::min(o, r);
    }
  }
  for (std::size_t p = 0; p < owner.size(); ++p)
    require(owner[p] != std::numeric_limits<int>::max(), ErrorCode::Integrity,
            "point " + std::to_string(p) + " lies in no cell");
  return owner;
}

std::vector<DistributedRank> distribute(const MeshGeometry& mesh, const PartitionMap& part,
                                        int overlap) {
  require(overlap >= 0, ErrorCode::Argument, "overlap must be non-negative");
  const Plex& plex = mesh.plex;
  const auto owner = point_owners(plex, part);
  const PointRange cells = plex.cells();
  const auto nchart = static_cast<std::size_t>(plex.chart_size());

  // Vertex-adjacency between cells for overlap growth
  std::vector<std::vector<Point>> cell_nbrs;
  if (overlap > 0) {
    cell_nbrs.resize(static_cast<std::size_t>(cells.size()));
    for (Point v : plex.depth_stratum(0)) {
      std::vector<Point> around;
      for (Point s : plex.star(v))
        if (plex.is_cell(s)) around.push_back(s);
      for (Point a : around)
        for (Point b : around)
          if (a != b) cell_nbrs[static_cast<std::size_t>(a - cells.start)].push_back(b);
    }
    for (auto& nb : cell_nbrs) {
      std::sort(nb.begin(), nb.end());
      nb.erase(std::unique(nb.begin(), nb.end()), nb.end());
    }
  }

  std::vector<DistributedRank> ranks(static_cast<std::size_t>(part.num_ranks));
  // Global -> local map per rank, needed to resolve roots
  std::vector<std::vector<Point>> g2l(ranks.size());

  for (int r = 0; r < part.num_ranks; ++r) {
    std::vector<char> in_cells(static_cast<std::size_t>(cells.size()), 0);
    std::vector<Point> layer;
    for (Point c : cells)
      if (part.cell_owner[static_cast<std::size_t>(c - cells.start)] == r) {
        in_cells[static_cast<std::size_t>(c - cells.start)] = 1;
        layer.push_back(c);
      }
    for (int o = 0; o < overlap; ++o) {
      std::vector<Point> next;
      for (Point c : layer)
        for (Point nb : cell_nbrs[static_cast<std::size_t>(c - cells.start)])
          if (!in_cells[static_cast<std::size_t>(nb - cells.start)]) {
            in_cells[static_cast<std::size_t>(nb - cells.start)] = 1;
            next.push_back(nb);
          }
      layer = std::move(next);
    }

    std::vector<char> present(nchart, 0);
    for (Point c : cells)
      if (in_cells[static_cast<std::size_t>(c - cells.start)])
        for (Point q : plex.closure(c, true)) present[static_cast<std::size_t>(q)] = 1;

    auto& local = ranks[static_cast<std::size_t>(r)].mesh;
    local.rank = r;
    local.num_ranks = part.num_ranks;
    auto& map = g2l[static_cast<std::size_t>(r)];
    map.assign(nchart, -1);
    for (std::size_t g = 0; g < nchart; ++g)
      if (present[g]) {
        map[g] = static_cast<Point>(local.l2g.size());
        local.l2g.push_back(static_cast<Point>(g));
        local.point_owner.push_back(owner[g]);
      }

    std::vector<std::vector<Point>> cones(local.l2g.size());
    for (std::size_t l = 0; l < local.l2g.size(); ++l)
      for (Point q : plex.cone(local.l2g[l])) cones[l].push_back(map[static_cast<std::size_t>(q)]);
    local.plex = Plex::from_cones(static_cast<Point>(local.l2g.size()), cones);

    // Carry global labels over to the local points
    for (const auto& [name, label] : plex.labels()) {
      Label& dst = local.plex.label(name);
      for (std::size_t l = 0; l < local.l2g.size(); ++l)
        if (auto v = label.value(local.l2g[l])) dst.set_value(static_cast<Point>(l), *v);
    }
  }

  for (auto& rank : ranks) {
    const auto& local = rank.mesh;
    for (std::size_t l = 0; l < local.l2g.size(); ++l) {
      const int o = local.point_owner[l];
      if (o == local.rank) continue;
      const Point root = g2l[static_cast<std::size_t>(o)][static_cast<std::size_t>(local.l2g[l])];
      require(root >= 0, ErrorCode::Integrity,
              "owner rank " + std::to_string(o) + " does not hold global point " +
                  std::to_string(local.l2g[l]));
      rank.sf.leaves.push_back({static_cast<Point>(l), o, root});
    }
  }
  return ranks;
}

Label mark_entity_classes(const LocalMesh& local, const PointSF& sf) {
  const Plex& plex = local.plex;
  Label classes{std::string(kClassLabel)};
  const auto core = static_cast<int>(EntityClass::Core);
  const auto noncore = static_cast<int>(EntityClass::NonCore);
  const auto halo = static_cast<int>(EntityClass::Halo);

  // Halo region from the star forest
  for (const auto& leaf : sf.leaves) classes.set_value(leaf.leaf, halo);

  const PointRange cells = plex.cells();
  bool any_halo_cell = false;
  for (Point c : cells)
    if (classes.has(halo, c)) {
      any_halo_cell = true;
      // Owned cells sharing any point with this halo cell depend on halo data
      for (Point q : plex.closure(c))
        for (Point s : plex.star(q))
          if (plex.is_cell(s) && !classes.has(halo, s)) classes.set_value(s, noncore);
    }
  if (local.num_ranks > 1 && !any_halo_cell)
    fail(ErrorCode::Precondition, "rank " + std::to_string(local.rank) +
                                      " has no halo cells; distribute with overlap >= 1");

  for (Point c : cells)
    if (!classes.value(c)) classes.set_value(c, core);

  for (Point p = 0; p < plex.chart_size(); ++p) {
    if (plex.is_cell(p) || classes.value(p)) continue;
    int cls = core;
    for (Point s : plex.star(p))
      if (plex.is_cell(s) && *classes.value(s) != core) {
        cls = noncore;
        break;
      }
    classes.set_value(p, cls);
  }
  return classes;
}

void write_partition_csv(const PartitionMap& part, std::ostream& out) {
  out << "cell_id,rank\n";
  for (std::size_t c = 0; c < part.cell_owner.size(); ++c) out << c << ',' << part.cell_owner[c] << '\n';
  if (!out) fail(ErrorCode::Io, "failed to write partition CSV");
}

PartitionMap read_partition_csv(std::istream& in) {
  PartitionMap part;
  part.num_ranks = 0;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line == "cell_id,rank") continue;
    std::istringstream row(line);
    long cell = -1;
    int rank = -1;
    char comma = 0;
    if (!(row >> cell >> comma >> rank) || comma != ',' || cell < 0 || rank < 0)
      fail(ErrorCode::Format, "bad partition CSV line " + std::to_string(lineno) + ": '" + line + "'");
    require(static_cast<std::size_t>(cell) == part.cell_owner.size(), ErrorCode::Format,
            "partition CSV cells must be listed in order (line " + std::to_string(lineno) + ")");
    part.cell_owner.push_back(rank);
    part.num_ranks = std::max(part.num_ranks, rank + 1);
  }
  return part;
}

} // namespace meshplex
