#include "meshplex/pipeline.hpp"

#include <ostream>

#include "json.hpp"
#include "meshplex/error.hpp"

namespace meshplex {

const char* to_string(CellOrdering o) noexcept {
  switch (o) {
  case CellOrdering::Native: return "native";
  case CellOrdering::Rcm: return "rcm";
  case CellOrdering::Shuffle: return "shuffle";
  }
  return "?";
}

CellOrdering parse_cell_ordering(const std::string& name) {
  if (name == "native") return CellOrdering::Native;
  if (name == "rcm") return CellOrdering::Rcm;
  if (name == "shuffle") return CellOrdering::Shuffle;
  fail(ErrorCode::Argument, "unknown ordering '" + name + "' (native, rcm or shuffle)");
}

std::vector<Point> cell_ordering(const Plex& plex, CellOrdering ordering, std::uint64_t seed) {
  switch (ordering) {
  case CellOrdering::Native: return native_cell_ordering(plex);
  case CellOrdering::Rcm: return rcm_ordering(plex);
  case CellOrdering::Shuffle: return shuffled_cell_ordering(plex, seed);
  }
  fail(ErrorCode::Argument, "unknown ordering");
}

Discretization discretize(const MeshGeometry& mesh, const PipelineConfig& config) {
  Discretization disc;
  disc.config = config;
  disc.layout = lagrange_dof_layout(mesh.cell_dimension, config.degree);
  disc.partition = partition(mesh, config.parts);

  auto distributed = distribute(mesh, disc.partition, config.overlap);
  disc.ranks.resize(distributed.size());
  for (std::size_t r = 0; r < distributed.size(); ++r) {
    auto& rank = disc.ranks[r];
    rank.mesh = std::move(distributed[r].mesh);
    rank.sf = std::move(distributed[r].sf);
    rank.mesh.classes = mark_entity_classes(rank.mesh, rank.sf);
    rank.cell_order = cell_ordering(rank.mesh.plex, config.ordering, config.seed);
    rank.perm = compact_class_permutation(rank.mesh, rank.cell_order);
    rank.section = create_section(rank.mesh.plex, rank.perm, disc.layout);
    rank.cell_map = cell_node_map(rank.mesh, rank.perm, rank.section, disc.layout);
    rank.facets = facet_maps(rank.mesh, rank.perm);
  }

  std::vector<RankLayout> layouts;
  std::vector<PointSF> sfs;
  std::vector<Section> sections;
  for (const auto& rank : disc.ranks) {
    layouts.push_back({&rank.mesh, &rank.sf, &rank.section});
    sfs.push_back(rank.sf);
    sections.push_back(rank.section);
  }
  auto global = global_numbering(layouts);
  for (std::size_t r = 0; r < disc.ranks.size(); ++r) disc.ranks[r].global = std::move(global[r]);
  disc.data_sf = derive_data_sf(sfs, sections);

  disc.rank_offsets.assign(1, 0);
  for (const auto& rank : disc.ranks) {
    GlobalDof owned = 0;
    for (Point p = 0; p < rank.mesh.plex.chart_size(); ++p)
      if (rank.mesh.owns(p)) owned += rank.section.count(p);
    disc.rank_offsets.push_back(disc.rank_offsets.back() + owned);
  }
  disc.global_size = disc.rank_offsets.back();
  return disc;
}

SparsityPattern Discretization::sparsity() const {
  std::vector<CellMap> maps;
  std::vector<std::vector<GlobalDof>> globals;
  for (const auto& rank : ranks) {
    maps.push_back(rank.cell_map);
    globals.push_back(rank.global);
  }
  return build_sparsity(maps, globals, global_size);
}

std::vector<double> point_field(const RankState& rank, const Section& section) {
  std::vector<double> values(static_cast<std::size_t>(section.total_size), 0.0);
  for (Point p = 0; p < rank.mesh.plex.chart_size(); ++p) {
    const auto g = static_cast<std::int64_t>(rank.mesh.l2g[static_cast<std::size_t>(p)]);
    for (LocalDof k = 0; k < section.count(p); ++k)
      values[static_cast<std::size_t>(section.start(p) + k)] = static_cast<double>((g * 5 + k) % 7 + 1);
  }
  return values;
}

BenchTimings run_benchmarks(const Discretization& disc, int rank, int repeats) {
  require(rank >= 0 && static_cast<std::size_t>(rank) < disc.ranks.size(), ErrorCode::Range,
          "no rank " + std::to_string(rank));
  const auto& state = disc.ranks[static_cast<std::size_t>(rank)];
  const auto data = point_field(state, state.section);
  BenchTimings t;
  auto cell = bench_cell_loop(state.cell_map, data, repeats);
  t.cell_seconds = cell.seconds;
  t.cell_values = std::move(cell.values);
  if (!state.facets.interior.empty()) {
    auto facet = bench_facet_loop(state.facets.interior, state.cell_map, data, repeats);
    t.facet_seconds = facet.seconds;
    t.facet_values = std::move(facet.values);
  }
  return t;
}

bool same_point_values(const RankState& a, std::span<const double> va, const RankState& b,
                       std::span<const double> vb) {
  const Point n = a.mesh.plex.chart_size();
  if (b.mesh.plex.chart_size() != n || a.mesh.l2g != b.mesh.l2g) return false;
  for (Point p = 0; p < n; ++p) {
    const LocalDof count = a.section.count(p);
    if (b.section.count(p) != count) return false;
    for (LocalDof k = 0; k < count; ++k) {
      const auto ia = static_cast<std::size_t>(a.section.start(p) + k);
      const auto ib = static_cast<std::size_t>(b.section.start(p) + k);
      if (ia >= va.size() || ib >= vb.size() || va[ia] != vb[ib]) return false;
    }
  }
  return true;
}

void write_mesh_info(const MeshGeometry& mesh, std::ostream& out) {
  static const char* const names2[] = {"vertices", "edges", "cells"};
  static const char* const names3[] = {"vertices", "edges", "facets", "cells"};
  const auto sizes = stratum_sizes(mesh.plex);
  out << "dimension " << mesh.cell_dimension << '\n';
  out << "points " << mesh.plex.chart_size() << '\n';
  for (std::size_t d = 0; d < sizes.size(); ++d) {
    const char* name = mesh.cell_dimension == 3 && d < 4   ? names3[d]
                       : mesh.cell_dimension == 2 && d < 3 ? names2[d]
                                                           : "points";
    const auto range = mesh.plex.depth_stratum(static_cast<int>(d));
    out << "depth " << d << ' ' << name << ' ' << sizes[d] << " [" << range.start << ", "
        << range.stop << ")\n";
  }
  const long chi = euler_characteristic(mesh.plex);
  out << "euler " << chi << (chi == 1 ? " ok" : " (not a topological ball)") << '\n';
  if (!out) fail(ErrorCode::Io, "failed to write mesh info");
}

void write_class_counts_csv(const Discretization& disc, std::ostream& out) {
  out << "rank,class,cells,points\n";
  for (const auto& rank : disc.ranks) {
    for (auto c : {EntityClass::Core, EntityClass::NonCore, EntityClass::Halo}) {
      std::int64_t cells = 0, points = 0;
      for (Point p = 0; p < rank.mesh.plex.chart_size(); ++p) {
        if (rank.mesh.entity_class(p) != c) continue;
        ++points;
        if (rank.mesh.plex.is_cell(p)) ++cells;
      }
      out << rank.mesh.rank << ',' << to_string(c) << ',' << cells << ',' << points << '\n';
    }
  }
  if (!out) fail(ErrorCode::Io, "failed to write class counts");
}

std::string bench_report_json(const MeshGeometry& mesh, PipelineConfig config, int repeats) {
  require(repeats >= 1, ErrorCode::Argument, "repeats must be at least 1");
  nlohmann::ordered_json report;
  report["cells"] = mesh.plex.depth_stratum(mesh.plex.max_depth()).size();
  report["degree"] = config.degree;
  report["parts"] = config.parts;
  report["repeats"] = repeats;

  nlohmann::ordered_json variants = nlohmann::ordered_json::object();
  nlohmann::ordered_json timings = nlohmann::ordered_json::object();
  std::vector<Discretization> discs;
  std::vector<BenchTimings> runs;
  for (auto ordering : {CellOrdering::Native, CellOrdering::Rcm}) {
    config.ordering = ordering;
    discs.push_back(discretize(mesh, config));
    const auto m = metrics(discs.back().sparsity());
    runs.push_back(run_benchmarks(discs.back(), 0, repeats));
    const std::string name = to_string(ordering);
    variants[name] = {{"dofs", discs.back().global_size},
                      {"bandwidth", m.bandwidth},
                      {"profile", m.profile},
                      {"nnz", m.nnz}};
    timings[name + ".cell"] = runs.back().cell_seconds;
    timings[name + ".facet"] = runs.back().facet_seconds;
  }
  const auto& a = discs[0].ranks[0];
  const auto& b = discs[1].ranks[0];
  report["variants"] = variants;
  report["results_match"] = {
      {"cell", same_point_values(a, runs[0].cell_values, b, runs[1].cell_values)},
      {"facet", same_point_values(a, runs[0].facet_values, b, runs[1].facet_values)}};
  report["timings"] = timings;
  return report.dump(2);
}

} // namespace meshplex
