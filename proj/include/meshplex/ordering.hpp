#pragma once

#include <array>
#include <cstdint>
#include <istream>
#include <ostream>
#include <span>
#include <vector>

#include "meshplex/partition.hpp"
#include "meshplex/plex.hpp"

namespace meshplex {

/// Bijective renumbering of a chart, split into core, non-core and halo
/// blocks: block i is [segment_bounds[i], segment_bounds[i+1]).
struct Permutation {
  std::vector<Point> new_of_old;
  std::array<Point, 4> segment_bounds{0, 0, 0, 0};

  Point size() const noexcept { return static_cast<Point>(new_of_old.size()); }
  std::vector<Point> old_of_new() const;

  static Permutation identity(Point n);
};

/// Throws an argument error unless `perm` is a bijection on [0, n).
void check_bijection(std::span<const Point> perm, Point n);

/// Cells adjacent iff they share a vertex; neighbour lists ascending.
/// Indexed by cell offset within the cell stratum.
std::vector<std::vector<Point>> cell_vertex_graph(const Plex& plex);

/// Cuthill-McKee sequence of the cells. Components are visited in order of
/// their lowest cell; each starts from a pseudo-peripheral cell found by two
/// farthest-cell sweeps, and neighbours are queued by ascending degree,
/// then ascending id.
std::vector<Point> cuthill_mckee_ordering(const Plex& plex);

/// Reverse of `cuthill_mckee_ordering`.
std::vector<Point> rcm_ordering(const Plex& plex);

/// Cells in ascending id.
std::vector<Point> native_cell_ordering(const Plex& plex);

/// Fisher-Yates shuffle of the cells driven by a SplitMix64 stream, so the
/// result is identical on every platform.
std::vector<Point> shuffled_cell_ordering(const Plex& plex, std::uint64_t seed);

/// Class-segmented, cell-wise compact permutation. Cells are walked in
/// `cell_order`; each point of a cell's inclusive closure that has not been
/// placed yet takes the next free slot of its own class block.
Permutation compact_class_permutation(const LocalMesh& local, std::span<const Point> cell_order);

/// A plex seen through a point renumbering. Every query takes and returns
/// new point ids.
class PermutedPlex {
public:
  PermutedPlex(const Plex& base, Permutation perm);

  Point chart_size() const noexcept { return base_->chart_size(); }
  std::vector<Point> cone(Point p) const;
  std::vector<Point> support(Point p) const;
  std::vector<Point> closure(Point p, bool include_self = false) const;
  std::vector<Point> star(Point p, bool include_self = false) const;
  std::vector<Point> adjacency(Point p) const;
  int depth(Point p) const;
  int max_depth() const noexcept { return base_->max_depth(); }

  /// New ids of the points at depth `d`, ascending.
  std::vector<Point> depth_stratum(int d) const;
  std::vector<Point> height_stratum(int h) const;

  const Label& label(std::string_view name) const;

  Point to_new(Point old_id) const;
  Point to_old(Point new_id) const;
  const Permutation& permutation() const noexcept { return perm_; }

private:
  std::vector<Point> rename(std::span<const Point> old_ids, bool sort) const;

  const Plex* base_;
  Permutation perm_;
  std::vector<Point> old_of_new_;
  std::map<std::string, Label, std::less<>> labels_;
};

PermutedPlex apply_permutation(const Plex& plex, Permutation perm);

/// Three `segment,start,stop` header lines, then `old_id,new_id` rows.
void write_permutation_csv(const Permutation& perm, std::ostream& out);
Permutation read_permutation_csv(std::istream& in);

} // namespace meshplex
