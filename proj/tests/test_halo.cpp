#include "doctest.h"

#include <limits>
#include <map>
#include <sstream>

#include "meshplex/error.hpp"
#include "support.hpp"

using namespace meshplex;

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

struct Halo {
  std::vector<DistributedRank> ranks;
  std::vector<PointSF> sfs;
  std::vector<Section> sections;
  DataSF sf;
};

Halo build(const MeshGeometry& mesh, int k, int degree) {
  Halo h;
  h.ranks = mptest::distribute_marked(mesh, k);
  const auto layout = lagrange_dof_layout(mesh.plex.max_depth(), degree);
  for (const auto& r : h.ranks) {
    const auto perm = compact_class_permutation(r.mesh, rcm_ordering(r.mesh.plex));
    h.sections.push_back(create_section(r.mesh.plex, perm, layout));
    h.sfs.push_back(r.sf);
  }
  h.sf = derive_data_sf(h.sfs, h.sections);
  return h;
}

template <typename T>
std::vector<std::vector<T>> arrays_of(const Halo& h, T value) {
  std::vector<std::vector<T>> out;
  for (const auto& s : h.sections) out.emplace_back(static_cast<std::size_t>(s.total_size), value);
  return out;
}

std::vector<std::vector<bool>> leaf_mask(const Halo& h) {
  std::vector<std::vector<bool>> mask;
  for (const auto& s : h.sections) mask.emplace_back(static_cast<std::size_t>(s.total_size), false);
  for (const auto& e : h.sf.edges) mask[static_cast<std::size_t>(e.leaf_rank)][static_cast<std::size_t>(e.leaf_index)] = true;
  return mask;
}

} // namespace

TEST_CASE("data star forest derivation") {
  SUBCASE("empty point star forest") {
    const auto h = build(unit_square_mesh(3, 3), 1, 3);
    CHECK(h.sf.edges.empty());
  }
  SUBCASE("P1 edges match halo vertices") {
    const auto h = build(unit_square_mesh(4, 4), 2, 1);
    for (std::size_t r = 0; r < 2; ++r) {
      const auto& local = h.ranks[r].mesh;
      std::size_t halo_vertices = 0;
      for (Point v : local.plex.depth_stratum(0)) halo_vertices += !local.owns(v);
      const auto edges = std::count_if(h.sf.edges.begin(), h.sf.edges.end(),
                                       [&](const DataEdge& e) { return e.leaf_rank == static_cast<int>(r); });
      CHECK(static_cast<std::size_t>(edges) == halo_vertices);
      CHECK(halo_vertices > 0);
    }
  }
  SUBCASE("P3 edges per shared point follow the layout") {
    const auto h = build(unit_square_mesh(4, 4), 2, 3);
    std::size_t expected = 0;
    for (std::size_t r = 0; r < 2; ++r)
      for (const auto& leaf : h.sfs[r].leaves) {
        const int d = h.ranks[r].mesh.plex.depth(leaf.leaf);
        expected += d == 0 ? 1 : d == 1 ? 2 : 1;
        if (d == 1) CHECK(h.sections[r].count(leaf.leaf) == 2);
      }
    CHECK(h.sf.edges.size() == expected);
  }
  SUBCASE("edges pair matching slots of the same mesh point") {
    for (int degree : {1, 2, 3}) {
      const auto h = build(unit_square_mesh(5, 3), 3, degree);
      std::map<std::pair<int, LocalDof>, std::pair<Point, LocalDof>> slot;
      for (std::size_t r = 0; r < h.ranks.size(); ++r) {
        const auto& local = h.ranks[r].mesh;
        for (Point p = 0; p < local.plex.chart_size(); ++p)
          for (LocalDof k = 0; k < h.sections[r].count(p); ++k)
            slot[{static_cast<int>(r), h.sections[r].start(p) + k}] = {local.l2g[static_cast<std::size_t>(p)], k};
      }
      for (const auto& e : h.sf.edges) CHECK(slot.at({e.leaf_rank, e.leaf_index}) == slot.at({e.root_rank, e.root_index}));
      for (std::size_t i = 1; i < h.sf.edges.size(); ++i) {
        const auto& a = h.sf.edges[i - 1];
        const auto& b = h.sf.edges[i];
        CHECK(std::pair{a.leaf_rank, a.leaf_index} < std::pair{b.leaf_rank, b.leaf_index});
      }
    }
  }
  SUBCASE("count mismatch is a layout error") {
    const auto h = build(unit_square_mesh(4, 4), 2, 1);
    auto sections = h.sections;
    const auto& leaf = h.sfs[1].leaves.front();
    sections[static_cast<std::size_t>(leaf.root_rank)].dof_count[static_cast<std::size_t>(leaf.root)] = 2;
    CHECK(code_of([&] { derive_data_sf(h.sfs, sections); }) == ErrorCode::Layout);
  }
  SUBCASE("malformed star forests") {
    const auto h = build(unit_square_mesh(4, 4), 2, 1);
    auto sfs = h.sfs;
    sfs[0].leaves.push_back({0, 7, 0});
    CHECK(code_of([&] { derive_data_sf(sfs, h.sections); }) == ErrorCode::Integrity);
    sfs = h.sfs;
    sfs[0].leaves.push_back({0, 0, 0});
    CHECK(code_of([&] { derive_data_sf(sfs, h.sections); }) == ErrorCode::Integrity);
    CHECK(code_of([&] { derive_data_sf(h.sfs, std::span<const Section>(h.sections).first(1)); }) ==
          ErrorCode::Argument);
  }
}

TEST_CASE("broadcast") {
  const auto h = build(unit_square_mesh(4, 4), 2, 3);
  std::vector<RankLayout> layouts;
  for (std::size_t r = 0; r < h.ranks.size(); ++r) layouts.push_back({&h.ranks[r].mesh, &h.sfs[r], &h.sections[r]});
  const auto global = global_numbering(layouts);

  // Roots seeded with their global ids, leaves with garbage
  auto values = arrays_of<GlobalDof>(h, -1);
  const auto mask = leaf_mask(h);
  for (std::size_t r = 0; r < values.size(); ++r)
    for (std::size_t i = 0; i < values[r].size(); ++i)
      if (!mask[r][i]) values[r][i] = global[r][i];
  sf_broadcast(h.sf, values);
  CHECK(values == global);
  auto twice = values;
  sf_broadcast(h.sf, twice);
  CHECK(twice == values);

  auto untouched = arrays_of<double>(h, 3.5);
  sf_broadcast(DataSF{}, untouched);
  CHECK(untouched == arrays_of<double>(h, 3.5));

  // Edge order does not matter
  DataSF shuffled = h.sf;
  std::reverse(shuffled.edges.begin(), shuffled.edges.end());
  auto again = arrays_of<GlobalDof>(h, -1);
  for (std::size_t r = 0; r < again.size(); ++r)
    for (std::size_t i = 0; i < again[r].size(); ++i)
      if (!mask[r][i]) again[r][i] = global[r][i];
  sf_broadcast(shuffled, again);
  CHECK(again == global);
}

TEST_CASE("reduce") {
  const auto h = build(unit_square_mesh(4, 4), 2, 1);
  const auto mask = leaf_mask(h);

  SUBCASE("sum of ones counts leaf multiplicity") {
    auto values = arrays_of<int>(h, 0);
    for (std::size_t r = 0; r < values.size(); ++r)
      for (std::size_t i = 0; i < values[r].size(); ++i)
        if (mask[r][i]) values[r][i] = 1;
    const auto before = values;
    sf_reduce(h.sf, values, ReduceOp::Sum);

    // Independent count: copies of each owned vertex on other ranks
    std::map<Point, int> copies;
    for (const auto& rank : h.ranks)
      for (Point v : rank.mesh.plex.depth_stratum(0))
        if (!rank.mesh.owns(v)) ++copies[rank.mesh.l2g[static_cast<std::size_t>(v)]];
    const auto mult = root_multiplicity(h.sf, h.sections);
    long total = 0;
    for (std::size_t r = 0; r < h.ranks.size(); ++r) {
      const auto& local = h.ranks[r].mesh;
      for (Point v : local.plex.depth_stratum(0)) {
        const auto slot = static_cast<std::size_t>(h.sections[r].start(v));
        if (local.owns(v)) {
          const auto it = copies.find(local.l2g[static_cast<std::size_t>(v)]);
          const int expected = it == copies.end() ? 0 : it->second;
          CHECK(values[r][slot] == expected);
          CHECK(mult[r][slot] == expected);
          total += values[r][slot];
        } else {
          CHECK(values[r][slot] == before[r][slot]);
        }
      }
    }
    CHECK(total == static_cast<long>(h.sf.edges.size()));
  }
  SUBCASE("max with negative infinity leaves roots unchanged") {
    constexpr double inf = std::numeric_limits<double>::infinity();
    auto values = arrays_of<double>(h, 0.0);
    for (std::size_t r = 0; r < values.size(); ++r)
      for (std::size_t i = 0; i < values[r].size(); ++i) values[r][i] = mask[r][i] ? -inf : static_cast<double>(i) + 0.5;
    const auto before = values;
    sf_reduce(h.sf, values, ReduceOp::Max);
    CHECK(values == before);
  }
  SUBCASE("sum after broadcasting zeros leaves roots unchanged") {
    auto values = arrays_of<double>(h, 0.0);
    for (std::size_t r = 0; r < values.size(); ++r)
      for (std::size_t i = 0; i < values[r].size(); ++i) values[r][i] = mask[r][i] ? 9.0 : 0.0;
    sf_broadcast(h.sf, values);
    sf_reduce(h.sf, values, ReduceOp::Sum);
    CHECK(values == arrays_of<double>(h, 0.0));
  }
  SUBCASE("sum folds in a fixed order") {
    auto a = arrays_of<double>(h, 0.0);
    for (std::size_t r = 0; r < a.size(); ++r)
      for (std::size_t i = 0; i < a[r].size(); ++i) a[r][i] = 1.0 / (3.0 + static_cast<double>(i + 7 * r));
    auto b = a;
    DataSF reversed = h.sf;
    std::reverse(reversed.edges.begin(), reversed.edges.end());
    sf_reduce(h.sf, a, ReduceOp::Sum);
    sf_reduce(reversed, b, ReduceOp::Sum);
    CHECK(a == b);
  }
  SUBCASE("replace needs a single leaf per root") {
    // Two ranks give every root one leaf; four ranks share corner vertices
    const auto h4 = build(unit_square_mesh(6, 6), 4, 1);
    const auto mult = root_multiplicity(h4.sf, h4.sections);
    bool shared_thrice = false;
    for (const auto& m : mult) shared_thrice |= std::any_of(m.begin(), m.end(), [](int c) { return c > 1; });
    REQUIRE(shared_thrice);
    auto values4 = arrays_of<int>(h4, 0);
    CHECK(code_of([&] { sf_reduce(h4.sf, values4, ReduceOp::Replace); }) == ErrorCode::Ambiguity);
    auto values = arrays_of<int>(h, 0);
    CHECK_NOTHROW(sf_reduce(h.sf, values, ReduceOp::Replace));
    DataSF single;
    single.edges.push_back(h.sf.edges.front());
    values[static_cast<std::size_t>(single.edges[0].leaf_rank)][static_cast<std::size_t>(single.edges[0].leaf_index)] = 42;
    sf_reduce(single, values, ReduceOp::Replace);
    CHECK(values[static_cast<std::size_t>(single.edges[0].root_rank)][static_cast<std::size_t>(single.edges[0].root_index)] == 42);
  }
  SUBCASE("round trip through a single-leaf forest") {
    DataSF single;
    std::set<std::pair<int, LocalDof>> roots;
    for (const auto& e : h.sf.edges)
      if (roots.insert({e.root_rank, e.root_index}).second) single.edges.push_back(e);
    auto values = arrays_of<int>(h, 0);
    for (std::size_t r = 0; r < values.size(); ++r)
      for (std::size_t i = 0; i < values[r].size(); ++i) values[r][i] = static_cast<int>(100 * r + i);
    const auto before = values;
    sf_broadcast(single, values);
    sf_reduce(single, values, ReduceOp::Replace);
    for (const auto& e : single.edges)
      CHECK(values[static_cast<std::size_t>(e.root_rank)][static_cast<std::size_t>(e.root_index)] ==
            before[static_cast<std::size_t>(e.root_rank)][static_cast<std::size_t>(e.root_index)]);
  }
}

TEST_CASE("out of bounds edges") {
  DataSF sf;
  sf.edges.push_back({0, 5, 1, 0});
  std::vector<std::vector<int>> arrays{std::vector<int>(3), std::vector<int>(3)};
  CHECK(code_of([&] { sf_broadcast(sf, arrays); }) == ErrorCode::Integrity);
  CHECK(code_of([&] { sf_reduce(sf, arrays, ReduceOp::Sum); }) == ErrorCode::Integrity);
  sf.edges[0] = {0, 0, 2, 0};
  CHECK(code_of([&] { sf_broadcast(sf, arrays); }) == ErrorCode::Integrity);
}

TEST_CASE("data star forest CSV") {
  DataSF sf;
  sf.edges = {{1, 4, 0, 2}, {1, 5, 0, 3}};
  std::ostringstream out;
  write_data_sf_csv(sf, out);
  CHECK(out.str() == "leaf_rank,leaf_idx,root_rank,root_idx\n1,4,0,2\n1,5,0,3\n");
}
