#include "meshplex/halo.hpp"

namespace meshplex {

DataSF derive_data_sf(std::span<const PointSF> point_sfs, std::span<const Section> sections) {
  require(point_sfs.size() == sections.size(), ErrorCode::Argument,
          "need one section per rank star forest");
  DataSF sf;
  for (std::size_t r = 0; r < point_sfs.size(); ++r) {
    const Section& leaf_sec = sections[r];
    for (const auto& leaf : point_sfs[r].leaves) {
      require(leaf.root_rank >= 0 && static_cast<std::size_t>(leaf.root_rank) < sections.size(),
              ErrorCode::Integrity, "leaf " + std::to_string(leaf.leaf) + " on rank " +
                                        std::to_string(r) + " names missing rank " +
                                        std::to_string(leaf.root_rank));
      require(static_cast<std::size_t>(leaf.root_rank) != r, ErrorCode::Integrity,
              "rank " + std::to_string(r) + " lists its own point " + std::to_string(leaf.leaf) +
                  " as a leaf");
      const Section& root_sec = sections[static_cast<std::size_t>(leaf.root_rank)];
      require(leaf.leaf >= 0 && leaf.leaf < leaf_sec.chart_size() && leaf.root >= 0 &&
                  leaf.root < root_sec.chart_size(),
              ErrorCode::Integrity, "star forest point outside section chart");
      const LocalDof n = leaf_sec.count(leaf.leaf);
      if (n != root_sec.count(leaf.root))
        fail(ErrorCode::Layout, "leaf point " + std::to_string(leaf.leaf) + " on rank " +
                                    std::to_string(r) + " has " + std::to_string(n) +
                                    " DoFs but its root " + std::to_string(leaf.root) +
                                    " on rank " + std::to_string(leaf.root_rank) + " has " +
                                    std::to_string(root_sec.count(leaf.root)));
      for (LocalDof k = 0; k < n; ++k)
        sf.edges.push_back({static_cast<int>(r), leaf_sec.start(leaf.leaf) + k, leaf.root_rank,
                            root_sec.start(leaf.root) + k});
    }
  }
  std::sort(sf.edges.begin(), sf.edges.end(), [](const DataEdge& a, const DataEdge& b) {
    return a.leaf_rank != b.leaf_rank ? a.leaf_rank < b.leaf_rank : a.leaf_index < b.leaf_index;
  });
  for (std::size_t i = 1; i < sf.edges.size(); ++i)
    require(!(sf.edges[i].leaf_rank == sf.edges[i - 1].leaf_rank &&
              sf.edges[i].leaf_index == sf.edges[i - 1].leaf_index),
            ErrorCode::Integrity,
            "leaf slot " + std::to_string(sf.edges[i].leaf_rank) + ":" +
                std::to_string(sf.edges[i].leaf_index) + " has two roots");
  return sf;
}

std::vector<std::vector<int>> root_multiplicity(const DataSF& sf,
                                                std::span<const Section> sections) {
  std::vector<std::vector<int>> counts;
  for (const auto& s : sections) counts.emplace_back(static_cast<std::size_t>(s.total_size), 0);
  check_sf_bounds(sf, counts);
  for (const auto& e : sf.edges) ++counts[e.root_rank][e.root_index];
  return counts;
}

void write_data_sf_csv(const DataSF& sf, std::ostream& out) {
  out << "leaf_rank,leaf_idx,root_rank,root_idx\n";
  for (const auto& e : sf.edges)
    out << e.leaf_rank << ',' << e.leaf_index << ',' << e.root_rank << ',' << e.root_index << '\n';
  if (!out) fail(ErrorCode::Io, "failed to write star forest CSV");
}

} // namespace meshplex
