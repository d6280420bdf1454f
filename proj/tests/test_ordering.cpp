#include "doctest.h"

#include <map>
#include <numeric>
#include <random>
#include <sstream>

#include "meshplex/error.hpp"
#include "support.hpp"

using namespace meshplex;
using V = std::vector<Point>;

namespace {

ErrorCode code_of(auto&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected a meshplex::Error");
  return ErrorCode::Argument;
}

V to_vec(std::span<const Point> s) { return V(s.begin(), s.end()); }

bool is_cell_permutation(const Plex& plex, V order) {
  std::sort(order.begin(), order.end());
  V cells;
  for (Point c : plex.cells()) cells.push_back(c);
  return order == cells;
}

Permutation random_permutation(Point n, unsigned seed) {
  V p(static_cast<std::size_t>(n));
  std::iota(p.begin(), p.end(), 0);
  std::mt19937 rng(seed);
  std::shuffle(p.begin(), p.end(), rng);
  Permutation perm;
  perm.new_of_old = p;
  perm.segment_bounds = {0, n, n, n};
  return perm;
}

V renamed(const PermutedPlex& pp, std::span<const Point> old_ids, bool sort) {
  V out;
  for (Point q : old_ids) out.push_back(pp.to_new(q));
  if (sort) std::sort(out.begin(), out.end());
  return out;
}

LocalMesh single_rank(const MeshGeometry& mesh) {
  auto ranks = mptest::distribute_marked(mesh, 1);
  return ranks[0].mesh;
}

} // namespace

TEST_CASE("cell vertex graph matches brute force") {
  for (const auto& [name, mesh] : mptest::test_meshes()) {
    CAPTURE(name);
    const Plex& plex = mesh.plex;
    const auto graph = cell_vertex_graph(plex);
    const PointRange cells = plex.cells();
    REQUIRE(graph.size() == static_cast<std::size_t>(cells.size()));
    for (Point a : cells) {
      V expected;
      const auto va = mptest::vertex_set(plex, a);
      for (Point b : cells) {
        if (a == b) continue;
        const auto vb = mptest::vertex_set(plex, b);
        if (std::any_of(vb.begin(), vb.end(), [&](Point v) { return va.count(v) > 0; }))
          expected.push_back(b - cells.start);
      }
      CHECK(graph[static_cast<std::size_t>(a - cells.start)] == expected);
    }
  }
}

TEST_CASE("rcm on small meshes") {
  CHECK(rcm_ordering(reference_tet().plex) == V{0});
  // Frozen from the independent oracle
  CHECK(rcm_ordering(unit_square_mesh(5, 1).plex) == V{8, 9, 6, 7, 4, 5, 2, 3, 0, 1});
  CHECK(rcm_ordering(unit_square_mesh(3, 2).plex) == V{4, 10, 5, 2, 11, 8, 3, 0, 9, 6, 1, 7});
}

TEST_CASE("rcm is the reversed Cuthill-McKee sequence and a permutation") {
  for (const auto& [name, mesh] : mptest::test_meshes()) {
    CAPTURE(name);
    auto cm = cuthill_mckee_ordering(mesh.plex);
    const auto rcm = rcm_ordering(mesh.plex);
    CHECK(is_cell_permutation(mesh.plex, rcm));
    std::reverse(cm.begin(), cm.end());
    CHECK(rcm == cm);
  }
}

TEST_CASE("rcm visits components by lowest cell") {
  // cells 0 and 2 share an edge, cell 1 stands alone
  const std::vector<std::vector<Point>> cells{{0, 1, 2}, {3, 4, 5}, {1, 2, 6}};
  const Plex plex = interpolate_simplices(2, 7, cells);
  CHECK(cuthill_mckee_ordering(plex) == V{0, 2, 1});
  CHECK(rcm_ordering(plex) == V{1, 2, 0});
}

TEST_CASE("native and shuffled cell orderings") {
  const Plex plex = unit_square_mesh(5, 1).plex;
  CHECK(native_cell_ordering(plex) == V{0, 1, 2, 3, 4, 5, 6, 7, 8, 9});
  // Frozen from the oracle's SplitMix64 Fisher-Yates
  CHECK(shuffled_cell_ordering(plex, 0x00C0FFEE5EED0001ULL) == V{2, 4, 7, 6, 0, 3, 9, 8, 5, 1});
  CHECK(shuffled_cell_ordering(plex, 0) == V{6, 3, 2, 9, 8, 1, 4, 7, 0, 5});
  for (const auto& [name, mesh] : mptest::test_meshes()) {
    CAPTURE(name);
    const auto a = shuffled_cell_ordering(mesh.plex, 42);
    CHECK(a == shuffled_cell_ordering(mesh.plex, 42));
    CHECK(is_cell_permutation(mesh.plex, a));
  }
  const Plex big = unit_square_mesh(8, 8).plex;
  CHECK(shuffled_cell_ordering(big, 1) != shuffled_cell_ordering(big, 2));
}

TEST_CASE("bijection checks") {
  CHECK_NOTHROW(check_bijection(V{2, 0, 1}, 3));
  CHECK(code_of([] { check_bijection(V{0, 0, 1}, 3); }) == ErrorCode::Argument);
  CHECK(code_of([] { check_bijection(V{0, 1}, 3); }) == ErrorCode::Argument);
  CHECK(code_of([] { check_bijection(V{0, 1, 3}, 3); }) == ErrorCode::Argument);
  const auto id = Permutation::identity(4);
  CHECK(id.new_of_old == V{0, 1, 2, 3});
  Permutation p;
  p.new_of_old = {2, 0, 3, 1};
  CHECK(p.old_of_new() == V{1, 3, 0, 2});
}

TEST_CASE("compact permutation on two triangles") {
  const auto local = single_rank(unit_square_mesh(1, 1));
  const auto perm = compact_class_permutation(local, native_cell_ordering(local.plex));
  CHECK(perm.new_of_old == mptest::kTwoTriangleCompact);
  CHECK(perm.segment_bounds == std::array<Point, 4>{0, 11, 11, 11});
}

TEST_CASE("compact permutation properties on distributed meshes") {
  std::vector<std::pair<std::string, MeshGeometry>> cases;
  for (int n : {2, 4, 6}) cases.emplace_back("square:" + std::to_string(n), unit_square_mesh(n, n));
  cases.emplace_back("square:3x7", unit_square_mesh(3, 7));
  cases.emplace_back("kuhn_cube", mptest::kuhn_cube());
  cases.emplace_back("tagged_square", read_gmsh_file(mptest::data_path("tagged_square.msh")));

  for (const auto& [name, mesh] : cases)
    for (int k : {1, 2, 3})
      for (auto kind : {CellOrdering::Native, CellOrdering::Rcm, CellOrdering::Shuffle}) {
        CAPTURE(name);
        CAPTURE(k);
        CAPTURE(to_string(kind));
        for (const auto& rank : mptest::distribute_marked(mesh, k)) {
          const auto& local = rank.mesh;
          const auto order = cell_ordering(local.plex, kind, 7);
          const auto perm = compact_class_permutation(local, order);
          const Point n = local.plex.chart_size();
          CHECK_NOTHROW(check_bijection(perm.new_of_old, n));

          // Blocks hold exactly their class, in core, non-core, halo order
          const auto& b = perm.segment_bounds;
          CHECK(b[0] == 0);
          CHECK(b[3] == n);
          for (int c = 0; c < 3; ++c)
            CHECK(b[static_cast<std::size_t>(c) + 1] - b[static_cast<std::size_t>(c)] ==
                  static_cast<Point>(local.classes.stratum_size(c)));
          for (Point p = 0; p < n; ++p) {
            const auto cls = static_cast<std::size_t>(local.entity_class(p));
            const Point np = perm.new_of_old[static_cast<std::size_t>(p)];
            CHECK(np >= b[cls]);
            CHECK(np < b[cls + 1]);
          }

          // First-touch runs: points a cell places first are contiguous in
          // each block, and runs follow the cell order
          std::vector<int> toucher(static_cast<std::size_t>(n), -1);
          for (std::size_t i = 0; i < order.size(); ++i)
            for (Point q : local.plex.closure(order[i], true))
              if (toucher[static_cast<std::size_t>(q)] < 0) toucher[static_cast<std::size_t>(q)] = static_cast<int>(i);
          std::map<std::pair<int, int>, std::vector<Point>> runs;
          for (Point p = 0; p < n; ++p)
            runs[{toucher[static_cast<std::size_t>(p)], static_cast<int>(local.entity_class(p))}].push_back(
                perm.new_of_old[static_cast<std::size_t>(p)]);
          for (auto& [key, pos] : runs) {
            std::sort(pos.begin(), pos.end());
            CHECK(pos.back() - pos.front() + 1 == static_cast<Point>(pos.size()));
          }
          const auto old_of_new = perm.old_of_new();
          for (Point q = 1; q < n; ++q) {
            const auto a = static_cast<std::size_t>(old_of_new[static_cast<std::size_t>(q - 1)]);
            const auto c = static_cast<std::size_t>(old_of_new[static_cast<std::size_t>(q)]);
            if (local.entity_class(static_cast<Point>(a)) == local.entity_class(static_cast<Point>(c)))
              CHECK(toucher[a] <= toucher[c]);
          }
        }
      }
}

TEST_CASE("compact permutation errors") {
  const auto local = single_rank(unit_square_mesh(1, 1));
  CHECK(code_of([&] { compact_class_permutation(local, V{0}); }) == ErrorCode::Argument);
  CHECK(code_of([&] { compact_class_permutation(local, V{0, 0}); }) == ErrorCode::Argument);
  CHECK(code_of([&] { compact_class_permutation(local, V{0, 5}); }) == ErrorCode::Argument);
  LocalMesh unmarked = local;
  unmarked.classes = Label(std::string(kClassLabel));
  CHECK(code_of([&] { compact_class_permutation(unmarked, V{0, 1}); }) == ErrorCode::Precondition);
}

TEST_CASE("identity view matches the base plex") {
  const Plex base = reference_tet().plex;
  const PermutedPlex pp(base, Permutation::identity(base.chart_size()));
  for (Point p = 0; p < base.chart_size(); ++p) {
    CHECK(pp.cone(p) == to_vec(base.cone(p)));
    CHECK(pp.support(p) == to_vec(base.support(p)));
    CHECK(pp.closure(p) == base.closure(p));
    CHECK(pp.star(p, true) == base.star(p, true));
    CHECK(pp.adjacency(p) == base.adjacency(p));
  }
}

TEST_CASE("permuted view renames every query") {
  for (const auto& [name, mesh] : mptest::test_meshes()) {
    if (mesh.plex.chart_size() > 300) continue;
    CAPTURE(name);
    const Plex& base = mesh.plex;
    const PermutedPlex pp = apply_permutation(base, random_permutation(base.chart_size(), 11));
    for (Point p = 0; p < base.chart_size(); ++p) {
      const Point q = pp.to_new(p);
      CHECK(pp.to_old(q) == p);
      CHECK(pp.depth(q) == base.depth(p));
      CHECK(pp.cone(q) == renamed(pp, base.cone(p), false));
      CHECK(pp.support(q) == renamed(pp, base.support(p), false));
      CHECK(pp.closure(q) == renamed(pp, base.closure(p), true));
      CHECK(pp.star(q) == renamed(pp, base.star(p), true));
      CHECK(pp.adjacency(q) == renamed(pp, base.adjacency(p), true));
    }
    for (int d = 0; d <= base.max_depth(); ++d) {
      V olds;
      for (Point p : base.depth_stratum(d)) olds.push_back(p);
      CHECK(pp.depth_stratum(d) == renamed(pp, olds, true));
      CHECK(pp.height_stratum(base.max_depth() - d) == pp.depth_stratum(d));
    }
  }
}

TEST_CASE("permuted view carries labels") {
  const auto mesh = unit_square_mesh(3, 3);
  const PermutedPlex pp(mesh.plex, random_permutation(mesh.plex.chart_size(), 5));
  const Label& b = pp.label(kBoundaryLabel);
  for (int side : {kLeft, kRight, kBottom, kTop})
    CHECK(b.stratum(side) == renamed(pp, mesh.boundary_labels().stratum(side), true));
  CHECK(code_of([&] { (void)pp.label("absent"); }) == ErrorCode::Argument);
  CHECK(code_of([&] { (void)pp.to_new(-1); }) == ErrorCode::Range);
  CHECK(code_of([&] { (void)pp.to_old(mesh.plex.chart_size()); }) == ErrorCode::Range);
}

TEST_CASE("permuted view swaps two faces") {
  const Plex base = reference_tet().plex;
  Permutation swap = Permutation::identity(15);
  std::swap(swap.new_of_old[5], swap.new_of_old[6]);
  const PermutedPlex pp(base, swap);
  CHECK(pp.cone(0) == V{6, 5, 7, 8});
  CHECK(pp.cone(5) == V{10, 12, 13});
  CHECK(pp.cone(6) == V{9, 10, 11});
  CHECK(pp.support(9) == V{6, 8});
}

TEST_CASE("permuted view rejects non-bijections") {
  const Plex base = reference_tet().plex;
  Permutation bad = Permutation::identity(15);
  bad.new_of_old[3] = 4;
  CHECK(code_of([&] { PermutedPlex pp(base, bad); }) == ErrorCode::Argument);
  Permutation short_perm = Permutation::identity(14);
  CHECK(code_of([&] { PermutedPlex pp(base, short_perm); }) == ErrorCode::Argument);
}

TEST_CASE("permutation CSV round trip") {
  const auto ranks = mptest::distribute_marked(unit_square_mesh(4, 4), 2);
  const auto& local = ranks[1].mesh;
  const auto perm = compact_class_permutation(local, rcm_ordering(local.plex));
  std::stringstream s;
  write_permutation_csv(perm, s);
  CHECK(s.str().rfind("core,0,", 0) == 0);
  const auto back = read_permutation_csv(s);
  CHECK(back.new_of_old == perm.new_of_old);
  CHECK(back.segment_bounds == perm.segment_bounds);

  std::istringstream truncated("core,0,2\nnon_core,2,2\n");
  CHECK(code_of([&] { read_permutation_csv(truncated); }) == ErrorCode::Format);
  std::istringstream gap("core,0,2\nnon_core,3,3\nhalo,3,3\n0,0\n1,1\n2,2\n");
  CHECK(code_of([&] { read_permutation_csv(gap); }) == ErrorCode::Format);
  std::istringstream bad_row("core,0,2\nnon_core,2,2\nhalo,2,2\n0;1\n");
  CHECK(code_of([&] { read_permutation_csv(bad_row); }) == ErrorCode::Format);
  std::istringstream dup("core,0,2\nnon_core,2,2\nhalo,2,2\n0,1\n1,1\n");
  CHECK(code_of([&] { read_permutation_csv(dup); }) == ErrorCode::Argument);
}
