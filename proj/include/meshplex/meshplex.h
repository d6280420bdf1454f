#ifndef MESHPLEX_H
#define MESHPLEX_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#  if defined(MESHPLEX_BUILDING)
#    define MP_API __declspec(dllexport)
#  else
#    define MP_API __declspec(dllimport)
#  endif
#else
#  define MP_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum mp_status {
  MP_OK = 0,
  MP_ERR_ARGUMENT = 1,
  MP_ERR_RANGE = 2,
  MP_ERR_TOPOLOGY = 3,
  MP_ERR_LAYOUT = 4,
  MP_ERR_FORMAT = 5,
  MP_ERR_INTEGRITY = 6,
  MP_ERR_PRECONDITION = 7,
  MP_ERR_AMBIGUITY = 8,
  MP_ERR_IO = 9,
  MP_ERR_INTERNAL = 10
} mp_status;

typedef enum mp_ordering { MP_ORDER_NATIVE = 0, MP_ORDER_RCM = 1, MP_ORDER_SHUFFLE = 2 } mp_ordering;

typedef enum mp_class { MP_CLASS_CORE = 0, MP_CLASS_NON_CORE = 1, MP_CLASS_HALO = 2 } mp_class;

typedef struct mp_mesh mp_mesh;
typedef struct mp_space mp_space;

typedef struct mp_space_options {
  int32_t parts;
  int32_t overlap;
  mp_ordering ordering;
  uint64_t seed;
  int32_t degree;
} mp_space_options;

typedef struct mp_metrics {
  int64_t bandwidth;
  int64_t profile;
  int64_t nnz;
  int64_t size;
} mp_metrics;

typedef struct mp_bench {
  double cell_seconds;
  double facet_seconds;
  /* Sums of the accumulated result arrays. */
  double cell_checksum;
  double facet_checksum;
} mp_bench;

/* Message of the last failed call on this thread; empty after success. */
MP_API const char* mp_last_error(void);
MP_API const char* mp_status_name(mp_status status);

/* Strings and byte buffers returned by the library are released with mp_free. */
MP_API void mp_free(void* ptr);

/* `square:NxM`, `tet:reference` or a path ending in `.msh`. */
MP_API mp_status mp_mesh_from_source(const char* source, mp_mesh** out);
MP_API mp_status mp_mesh_generate_square(int32_t nx, int32_t ny, mp_mesh** out);
MP_API mp_status mp_mesh_read_gmsh(const char* path, mp_mesh** out);
MP_API mp_status mp_mesh_parse_gmsh(const char* text, size_t length, mp_mesh** out);
MP_API void mp_mesh_destroy(mp_mesh* mesh);

MP_API mp_status mp_mesh_dimension(const mp_mesh* mesh, int32_t* dim);
MP_API mp_status mp_mesh_num_points(const mp_mesh* mesh, int32_t* count);
MP_API mp_status mp_mesh_stratum_size(const mp_mesh* mesh, int32_t depth, int32_t* count);
MP_API mp_status mp_mesh_euler(const mp_mesh* mesh, int64_t* chi);
MP_API mp_status mp_mesh_info(const mp_mesh* mesh, char** text);

MP_API void mp_space_options_init(mp_space_options* options);
MP_API mp_status mp_space_create(const mp_mesh* mesh, const mp_space_options* options, mp_space** out);
MP_API void mp_space_destroy(mp_space* space);

MP_API mp_status mp_space_num_ranks(const mp_space* space, int32_t* count);
MP_API mp_status mp_space_global_size(const mp_space* space, int64_t* size);
/* Cells (cells_only != 0) or points of one class on one rank. */
MP_API mp_status mp_space_class_count(const mp_space* space, int32_t rank, mp_class cls,
                                      int32_t cells_only, int64_t* count);
MP_API mp_status mp_space_metrics(const mp_space* space, mp_metrics* metrics);
MP_API mp_status mp_space_bench(const mp_space* space, int32_t rank, int32_t repeats, mp_bench* result);

MP_API mp_status mp_space_partition_csv(const mp_space* space, char** text);
MP_API mp_status mp_space_classes_csv(const mp_space* space, char** text);
MP_API mp_status mp_space_permutation_csv(const mp_space* space, int32_t rank, char** text);
MP_API mp_status mp_space_cell_map_csv(const mp_space* space, int32_t rank, char** text);
MP_API mp_status mp_space_data_sf_csv(const mp_space* space, char** text);
MP_API mp_status mp_space_metrics_json(const mp_space* space, char** text);
/* PBM portrait, or the PGM variant with rank boundaries when with_ranks != 0. */
MP_API mp_status mp_space_portrait(const mp_space* space, int32_t with_ranks, char** bytes, size_t* length);

/* Native versus rcm comparison on `mesh`; options->ordering is ignored. */
MP_API mp_status mp_bench_report_json(const mp_mesh* mesh, const mp_space_options* options,
                                      int32_t repeats, char** text);

#ifdef __cplusplus
}
#endif

#endif
