#pragma once

#include <cstdint>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "meshplex/halo.hpp"
#include "meshplex/layout.hpp"
#include "meshplex/mesh.hpp"
#include "meshplex/ordering.hpp"
#include "meshplex/partition.hpp"
#include "meshplex/sparsity.hpp"

namespace meshplex {

enum class CellOrdering { Native, Rcm, Shuffle };

const char* to_string(CellOrdering o) noexcept;
CellOrdering parse_cell_ordering(const std::string& name);

struct PipelineConfig {
  int parts = 1;
  int overlap = 1;
  CellOrdering ordering = CellOrdering::Rcm;
  std::uint64_t seed = 0;
  int degree = 1;
};

/// Everything one simulated rank holds after layout.
struct RankState {
  LocalMesh mesh;
  PointSF sf;
  std::vector<Point> cell_order;
  Permutation perm;
  Section section;
  CellMap cell_map;
  FacetMaps facets;
  std::vector<GlobalDof> global;
};

/// Mesh -> partition -> overlap -> classes -> ordering -> section -> maps ->
/// global numbering, for every rank.
struct Discretization {
  PipelineConfig config;
  PartitionMap partition;
  DofLayout layout;
  std::vector<RankState> ranks;
  DataSF data_sf;
  GlobalDof global_size = 0;
  /// First global DoF of every rank, plus the total at the end.
  std::vector<GlobalDof> rank_offsets;

  SparsityPattern sparsity() const;
};

std::vector<Point> cell_ordering(const Plex& plex, CellOrdering ordering, std::uint64_t seed);

Discretization discretize(const MeshGeometry& mesh, const PipelineConfig& config);

/// Data value of every local DoF, keyed on the mesh point so all orderings
/// see the same field: DoF k of global point g holds (5g + k) mod 7 + 1.
/// Integer-valued, so loop sums are exact.
std::vector<double> point_field(const RankState& rank, const Section& section);

struct BenchTimings {
  double cell_seconds = 0.0;
  double facet_seconds = 0.0;
  std::vector<double> cell_values;
  std::vector<double> facet_values;
};

/// Runs both assembly loops on one rank with `point_field` data.
BenchTimings run_benchmarks(const Discretization& disc, int rank, int repeats);

/// True when two loop results over the same local mesh agree point by point,
/// each read through its own section.
bool same_point_values(const RankState& a, std::span<const double> va, const RankState& b,
                       std::span<const double> vb);

/// Strata sizes, entity counts and the Euler characteristic as text lines.
void write_mesh_info(const MeshGeometry& mesh, std::ostream& out);

/// `rank,class,cells,points` rows for every rank and entity class.
void write_class_counts_csv(const Discretization& disc, std::ostream& out);

/// Runs the native and rcm variants of `config` on `mesh` and reports the
/// sparsity metrics of each, whether the loop results agree, and the loop
/// timings under a separate `timings` key.
std::string bench_report_json(const MeshGeometry& mesh, PipelineConfig config, int repeats);

} // namespace meshplex
