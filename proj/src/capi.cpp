#include "meshplex/meshplex.h"

#include <cstdlib>
#include <cstring>
#include <new>
#include <numeric>
#include <sstream>
#include <string>

#include "meshplex/error.hpp"
#include "meshplex/pipeline.hpp"

struct mp_mesh {
  meshplex::MeshGeometry geometry;
};

struct mp_space {
  meshplex::Discretization disc;
};

namespace {

thread_local std::string last_error;

mp_status record(mp_status status, std::string message) {
  last_error = std::move(message);
  return status;
}

template <class F>
mp_status guarded(F&& body) {
  try {
    body();
    last_error.clear();
    return MP_OK;
  } catch (const meshplex::Error& e) {
    return record(static_cast<mp_status>(static_cast<int>(e.code())), e.what());
  } catch (const std::bad_alloc&) {
    return record(MP_ERR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return record(MP_ERR_INTERNAL, e.what());
  } catch (...) {
    return record(MP_ERR_INTERNAL, "unknown failure");
  }
}

void need(const void* p, const char* name) {
  if (!p) meshplex::fail(meshplex::ErrorCode::Argument, std::string(name) + " is null");
}

char* copy_out(const std::string& s) {
  auto* buf = static_cast<char*>(std::malloc(s.size() + 1));
  if (!buf) throw std::bad_alloc();
  std::memcpy(buf, s.data(), s.size());
  buf[s.size()] = '\0';
  return buf;
}

template <class Writer>
mp_status export_text(char** text, Writer&& writer) {
  return guarded([&] {
    need(text, "output pointer");
    *text = nullptr;
    std::ostringstream out;
    writer(out);
    *text = copy_out(out.str());
  });
}

const meshplex::RankState& rank_of(const mp_space* space, int32_t rank) {
  need(space, "space");
  if (rank < 0 || static_cast<std::size_t>(rank) >= space->disc.ranks.size())
    meshplex::fail(meshplex::ErrorCode::Range, "no rank " + std::to_string(rank));
  return space->disc.ranks[static_cast<std::size_t>(rank)];
}

meshplex::PipelineConfig to_config(const mp_space_options* options) {
  mp_space_options o;
  mp_space_options_init(&o);
  if (options) o = *options;
  meshplex::PipelineConfig config;
  config.parts = o.parts;
  config.overlap = o.overlap;
  switch (o.ordering) {
  case MP_ORDER_NATIVE: config.ordering = meshplex::CellOrdering::Native; break;
  case MP_ORDER_RCM: config.ordering = meshplex::CellOrdering::Rcm; break;
  case MP_ORDER_SHUFFLE: config.ordering = meshplex::CellOrdering::Shuffle; break;
  default: meshplex::fail(meshplex::ErrorCode::Argument, "unknown ordering code");
  }
  config.seed = o.seed;
  config.degree = o.degree;
  return config;
}

mp_status make_mesh(mp_mesh** out, meshplex::MeshGeometry (*build)(const void*), const void* arg) {
  return guarded([&] {
    need(out, "output pointer");
    *out = nullptr;
    *out = new mp_mesh{build(arg)};
  });
}

} // namespace

extern "C" {

const char* mp_last_error(void) { return last_error.c_str(); }

const char* mp_status_name(mp_status status) {
  if (status == MP_OK) return "ok";
  if (status == MP_ERR_INTERNAL) return "internal error";
  if (status < MP_OK || status > MP_ERR_INTERNAL) return "unknown status";
  return meshplex::to_string(static_cast<meshplex::ErrorCode>(static_cast<int>(status)));
}

void mp_free(void* ptr) { std::free(ptr); }

mp_status mp_mesh_from_source(const char* source, mp_mesh** out) {
  if (!source) return record(MP_ERR_ARGUMENT, "argument error: source is null");
  return make_mesh(out, [](const void* s) { return meshplex::mesh_from_source(static_cast<const char*>(s)); },
                   source);
}

mp_status mp_mesh_generate_square(int32_t nx, int32_t ny, mp_mesh** out) {
  return guarded([&] {
    need(out, "output pointer");
    *out = nullptr;
    *out = new mp_mesh{meshplex::unit_square_mesh(nx, ny)};
  });
}

mp_status mp_mesh_read_gmsh(const char* path, mp_mesh** out) {
  if (!path) return record(MP_ERR_ARGUMENT, "argument error: path is null");
  return make_mesh(out, [](const void* p) { return meshplex::read_gmsh_file(static_cast<const char*>(p)); },
                   path);
}

mp_status mp_mesh_parse_gmsh(const char* text, size_t length, mp_mesh** out) {
  return guarded([&] {
    need(text, "text");
    need(out, "output pointer");
    *out = nullptr;
    std::istringstream in(std::string(text, length));
    *out = new mp_mesh{meshplex::read_gmsh(in)};
  });
}

void mp_mesh_destroy(mp_mesh* mesh) { delete mesh; }

mp_status mp_mesh_dimension(const mp_mesh* mesh, int32_t* dim) {
  return guarded([&] {
    need(mesh, "mesh");
    need(dim, "output pointer");
    *dim = mesh->geometry.cell_dimension;
  });
}

mp_status mp_mesh_num_points(const mp_mesh* mesh, int32_t* count) {
  return guarded([&] {
    need(mesh, "mesh");
    need(count, "output pointer");
    *count = mesh->geometry.plex.chart_size();
  });
}

mp_status mp_mesh_stratum_size(const mp_mesh* mesh, int32_t depth, int32_t* count) {
  return guarded([&] {
    need(mesh, "mesh");
    need(count, "output pointer");
    *count = mesh->geometry.plex.depth_stratum(depth).size();
  });
}

mp_status mp_mesh_euler(const mp_mesh* mesh, int64_t* chi) {
  return guarded([&] {
    need(mesh, "mesh");
    need(chi, "output pointer");
    *chi = meshplex::euler_characteristic(mesh->geometry.plex);
  });
}

mp_status mp_mesh_info(const mp_mesh* mesh, char** text) {
  return export_text(text, [&](std::ostream& out) {
    need(mesh, "mesh");
    meshplex::write_mesh_info(mesh->geometry, out);
  });
}

void mp_space_options_init(mp_space_options* options) {
  if (!options) return;
  options->parts = 1;
  options->overlap = 1;
  options->ordering = MP_ORDER_RCM;
  options->seed = 0;
  options->degree = 1;
}

mp_status mp_space_create(const mp_mesh* mesh, const mp_space_options* options, mp_space** out) {
  return guarded([&] {
    need(mesh, "mesh");
    need(out, "output pointer");
    *out = nullptr;
    *out = new mp_space{meshplex::discretize(mesh->geometry, to_config(options))};
  });
}

void mp_space_destroy(mp_space* space) { delete space; }

mp_status mp_space_num_ranks(const mp_space* space, int32_t* count) {
  return guarded([&] {
    need(space, "space");
    need(count, "output pointer");
    *count = static_cast<int32_t>(space->disc.ranks.size());
  });
}

mp_status mp_space_global_size(const mp_space* space, int64_t* size) {
  return guarded([&] {
    need(space, "space");
    need(size, "output pointer");
    *size = space->disc.global_size;
  });
}

mp_status mp_space_class_count(const mp_space* space, int32_t rank, mp_class cls, int32_t cells_only,
                               int64_t* count) {
  return guarded([&] {
    const auto& state = rank_of(space, rank);
    need(count, "output pointer");
    if (cls < MP_CLASS_CORE || cls > MP_CLASS_HALO)
      meshplex::fail(meshplex::ErrorCode::Argument, "unknown entity class code");
    const auto want = static_cast<meshplex::EntityClass>(static_cast<int>(cls));
    int64_t n = 0;
    const auto& plex = state.mesh.plex;
    for (meshplex::Point p = 0; p < plex.chart_size(); ++p)
      if ((!cells_only || plex.is_cell(p)) && state.mesh.entity_class(p) == want) ++n;
    *count = n;
  });
}

mp_status mp_space_metrics(const mp_space* space, mp_metrics* metrics) {
  return guarded([&] {
    need(space, "space");
    need(metrics, "output pointer");
    const auto report = meshplex::metrics(space->disc.sparsity());
    metrics->bandwidth = report.bandwidth;
    metrics->profile = report.profile;
    metrics->nnz = report.nnz;
    metrics->size = space->disc.global_size;
  });
}

mp_status mp_space_bench(const mp_space* space, int32_t rank, int32_t repeats, mp_bench* result) {
  return guarded([&] {
    need(space, "space");
    need(result, "output pointer");
    const auto t = meshplex::run_benchmarks(space->disc, rank, repeats);
    result->cell_seconds = t.cell_seconds;
    result->facet_seconds = t.facet_seconds;
    result->cell_checksum = std::accumulate(t.cell_values.begin(), t.cell_values.end(), 0.0);
    result->facet_checksum = std::accumulate(t.facet_values.begin(), t.facet_values.end(), 0.0);
  });
}

mp_status mp_space_partition_csv(const mp_space* space, char** text) {
  return export_text(text, [&](std::ostream& out) {
    need(space, "space");
    meshplex::write_partition_csv(space->disc.partition, out);
  });
}

mp_status mp_space_classes_csv(const mp_space* space, char** text) {
  return export_text(text, [&](std::ostream& out) {
    need(space, "space");
    meshplex::write_class_counts_csv(space->disc, out);
  });
}

mp_status mp_space_permutation_csv(const mp_space* space, int32_t rank, char** text) {
  return export_text(text, [&](std::ostream& out) {
    meshplex::write_permutation_csv(rank_of(space, rank).perm, out);
  });
}

mp_status mp_space_cell_map_csv(const mp_space* space, int32_t rank, char** text) {
  return export_text(text, [&](std::ostream& out) {
    meshplex::write_cell_map_csv(rank_of(space, rank).cell_map, out);
  });
}

mp_status mp_space_data_sf_csv(const mp_space* space, char** text) {
  return export_text(text, [&](std::ostream& out) {
    need(space, "space");
    meshplex::write_data_sf_csv(space->disc.data_sf, out);
  });
}

mp_status mp_space_metrics_json(const mp_space* space, char** text) {
  return export_text(text, [&](std::ostream& out) {
    need(space, "space");
    out << meshplex::to_json(meshplex::metrics(space->disc.sparsity())) << '\n';
  });
}

mp_status mp_space_portrait(const mp_space* space, int32_t with_ranks, char** bytes, size_t* length) {
  return guarded([&] {
    need(space, "space");
    need(bytes, "output pointer");
    need(length, "length pointer");
    *bytes = nullptr;
    *length = 0;
    std::ostringstream out;
    const auto pattern = space->disc.sparsity();
    if (with_ranks)
      meshplex::write_portrait_pgm(pattern, space->disc.rank_offsets, out);
    else
      meshplex::write_portrait_pbm(pattern, out);
    const std::string s = out.str();
    *bytes = copy_out(s);
    *length = s.size();
  });
}

mp_status mp_bench_report_json(const mp_mesh* mesh, const mp_space_options* options, int32_t repeats,
                               char** text) {
  return export_text(text, [&](std::ostream& out) {
    need(mesh, "mesh");
    out << meshplex::bench_report_json(mesh->geometry, to_config(options), repeats) << '\n';
  });
}

} // extern "C"
