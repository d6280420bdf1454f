// Command-line driver over the meshplex C API.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <limits>
#include <string>

#include "CLI11.hpp"
#include "meshplex/meshplex.h"

namespace {

const auto kPositive = CLI::Range(1, std::numeric_limits<int>::max());
const auto kNonNegative = CLI::Range(0, std::numeric_limits<int>::max());

struct Options {
  std::string gen;
  std::string mesh;
  int parts = 1;
  int overlap = 1;
  std::string order = "rcm";
  std::uint64_t seed = 0;
  int degree = 1;
  int rank = 0;
  int repeats = 100;
  std::string out;
};

struct StageError {
  std::string stage;
  std::string message;
};

void check(mp_status status, const char* stage) {
  if (status != MP_OK) throw StageError{stage, mp_last_error()};
}

struct MeshHandle {
  mp_mesh* ptr = nullptr;
  ~MeshHandle() { mp_mesh_destroy(ptr); }
};

struct SpaceHandle {
  mp_space* ptr = nullptr;
  ~SpaceHandle() { mp_space_destroy(ptr); }
};

struct Buffer {
  char* data = nullptr;
  std::size_t size = 0;
  ~Buffer() { mp_free(data); }
  std::string str() const { return data ? std::string(data, size ? size : std::char_traits<char>::length(data)) : std::string(); }
};

void add_source(CLI::App* cmd, Options& o) {
  auto* gen = cmd->add_option("--gen", o.gen, "Generated mesh: square:NxM or tet:reference");
  auto* mesh = cmd->add_option("--mesh", o.mesh, "Gmsh 2.2 ASCII mesh file")->check(CLI::ExistingFile);
  gen->excludes(mesh);
  mesh->excludes(gen);
  cmd->callback([cmd, gen, mesh] {
    if (gen->count() + mesh->count() != 1)
      throw CLI::RequiredError(cmd->get_name() + ": exactly one of --gen or --mesh");
  });
}

void add_parts(CLI::App* cmd, Options& o) {
  cmd->add_option("--parts", o.parts, "Number of simulated ranks")->check(kPositive);
  cmd->add_option("--overlap", o.overlap, "Ghost cell layers")->check(kNonNegative);
}

void add_order(CLI::App* cmd, Options& o) {
  cmd->add_option("--order", o.order, "Cell ordering")->check(CLI::IsMember({"native", "rcm", "shuffle"}));
  cmd->add_option("--seed", o.seed, "Shuffle seed");
}

void add_degree(CLI::App* cmd, Options& o) {
  cmd->add_option("--degree", o.degree, "Lagrange degree")->check(CLI::Range(1, 3));
}

void add_out(CLI::App* cmd, Options& o, const char* help) { cmd->add_option("--out", o.out, help); }

MeshHandle load_mesh(const Options& o) {
  MeshHandle mesh;
  if (!o.mesh.empty())
    check(mp_mesh_read_gmsh(o.mesh.c_str(), &mesh.ptr), "mesh");
  else
    check(mp_mesh_from_source(o.gen.c_str(), &mesh.ptr), "mesh");
  return mesh;
}

mp_space_options space_options(const Options& o) {
  mp_space_options opts;
  mp_space_options_init(&opts);
  opts.parts = o.parts;
  opts.overlap = o.overlap;
  opts.ordering = o.order == "native" ? MP_ORDER_NATIVE : o.order == "shuffle" ? MP_ORDER_SHUFFLE : MP_ORDER_RCM;
  opts.seed = o.seed;
  opts.degree = o.degree;
  return opts;
}

SpaceHandle build_space(const mp_mesh* mesh, const Options& o) {
  SpaceHandle space;
  const auto opts = space_options(o);
  check(mp_space_create(mesh, &opts, &space.ptr), "discretize");
  return space;
}

void write_file(const std::string& path, const std::string& bytes) {
  std::ofstream f(path, std::ios::binary);
  f.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!f) throw StageError{"write", "cannot write " + path};
}

void emit(const Options& o, const std::string& text) {
  if (o.out.empty()) {
    std::cout << text;
    std::cout.flush();
    if (!std::cout) throw StageError{"write", "cannot write to standard output"};
  } else {
    write_file(o.out, text);
  }
}

void run_info(const Options& o) {
  auto mesh = load_mesh(o);
  Buffer text;
  check(mp_mesh_info(mesh.ptr, &text.data), "info");
  emit(o, text.str());
}

void run_partition(const Options& o) {
  auto mesh = load_mesh(o);
  auto space = build_space(mesh.ptr, o);
  Buffer text;
  check(mp_space_partition_csv(space.ptr, &text.data), "partition");
  emit(o, text.str());
}

void run_classes(const Options& o) {
  auto mesh = load_mesh(o);
  auto space = build_space(mesh.ptr, o);
  Buffer text;
  check(mp_space_classes_csv(space.ptr, &text.data), "classes");
  emit(o, text.str());
}

void run_reorder(const Options& o) {
  auto mesh = load_mesh(o);
  auto space = build_space(mesh.ptr, o);
  Buffer text;
  check(mp_space_permutation_csv(space.ptr, o.rank, &text.data), "reorder");
  emit(o, text.str());
}

void run_sparsity(const Options& o) {
  auto mesh = load_mesh(o);
  auto space = build_space(mesh.ptr, o);
  Buffer json;
  check(mp_space_metrics_json(space.ptr, &json.data), "metrics");
  if (o.out.empty()) {
    emit(o, json.str());
    return;
  }
  Buffer pbm;
  check(mp_space_portrait(space.ptr, 0, &pbm.data, &pbm.size), "portrait");
  write_file(o.out + ".pbm", pbm.str());
  if (o.parts > 1) {
    Buffer pgm;
    check(mp_space_portrait(space.ptr, 1, &pgm.data, &pgm.size), "portrait");
    write_file(o.out + ".pgm", pgm.str());
  }
  write_file(o.out + ".json", json.str());
}

void run_bench(const Options& o) {
  auto mesh = load_mesh(o);
  const auto opts = space_options(o);
  Buffer json;
  check(mp_bench_report_json(mesh.ptr, &opts, o.repeats, &json.data), "bench");
  emit(o, json.str());
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"Mesh topology, partitioning, ordering and layout toolkit"};
  app.require_subcommand(1);
  Options o;

  auto* info = app.add_subcommand("info", "Strata sizes and Euler check");
  add_source(info, o);
  add_out(info, o, "Output file (default: standard output)");

  auto* part = app.add_subcommand("partition", "Cell owner map as CSV");
  add_source(part, o);
  add_parts(part, o);
  add_out(part, o, "Output file (default: standard output)");

  auto* classes = app.add_subcommand("classes", "Per-rank core/non-core/halo counts as CSV");
  add_source(classes, o);
  add_parts(classes, o);
  add_out(classes, o, "Output file (default: standard output)");

  auto* reorder = app.add_subcommand("reorder", "Point permutation of one rank as CSV");
  add_source(reorder, o);
  add_parts(reorder, o);
  add_order(reorder, o);
  reorder->add_option("--rank", o.rank, "Rank whose permutation is written")->check(kNonNegative);
  add_out(reorder, o, "Output file (default: standard output)");

  auto* sparsity = app.add_subcommand("sparsity", "Matrix portrait and bandwidth metrics");
  add_source(sparsity, o);
  add_parts(sparsity, o);
  add_order(sparsity, o);
  add_degree(sparsity, o);
  add_out(sparsity, o, "Output prefix for .pbm/.pgm/.json (default: metrics JSON to standard output)");

  auto* bench = app.add_subcommand("bench", "Native versus RCM assembly loop timings as JSON");
  add_source(bench, o);
  add_parts(bench, o);
  add_degree(bench, o);
  bench->add_option("--repeats", o.repeats, "Timed repetitions")->check(kPositive);
  add_out(bench, o, "Output file (default: standard output)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  const auto* cmd = app.get_subcommands().front();
  try {
    const std::string name = cmd->get_name();
    if (name == "info") run_info(o);
    else if (name == "partition") run_partition(o);
    else if (name == "classes") run_classes(o);
    else if (name == "reorder") run_reorder(o);
    else if (name == "sparsity") run_sparsity(o);
    else if (name == "bench") run_bench(o);
  } catch (const StageError& e) {
    std::cerr << "meshplex " << cmd->get_name() << ": " << e.stage << ": " << e.message << '\n';
    return 1;
  }
  return 0;
}
