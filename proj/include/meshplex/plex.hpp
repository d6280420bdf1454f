#pragma once

#include <cstddef>
#include <cstdint>
#include <iterator>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace meshplex {

/// Index of a mesh entity in the plex chart. Vertices, edges, facets and
/// cells share one consecutive numbering.
using Point = std::int32_t;

/// Half-open range [start, stop) of consecutive points.
struct PointRange {
  Point start = 0;
  Point stop = 0;

  Point size() const noexcept { return stop - start; }
  bool empty() const noexcept { return start == stop; }
  bool contains(Point p) const noexcept { return p >= start && p < stop; }

  struct iterator {
    using iterator_category = std::forward_iterator_tag;
    using value_type = Point;
    using difference_type = std::ptrdiff_t;
    using pointer = const Point*;
    using reference = Point;

    Point p = 0;
    Point operator*() const noexcept { return p; }
    iterator& operator++() noexcept {
      ++p;
      return *this;
    }
    iterator operator++(int) noexcept {
      iterator old = *this;
      ++p;
      return old;
    }
    bool operator==(const iterator&) const = default;
  };
  iterator begin() const noexcept { return {start}; }
  iterator end() const noexcept { return {stop}; }

  bool operator==(const PointRange&) const = default;
};

struct Stratum {
  int depth = 0;
  PointRange points;
};

/// Integer values attached to points, one value per point.
class Label {
public:
  Label() = default;
  explicit Label(std::string name) : name_(std::move(name)) {}

  const std::string& name() const noexcept { return name_; }

  /// Overwrites any previous value held by `p`.
  void set_value(Point p, int value);
  void clear_value(Point p);
  std::optional<int> value(Point p) const;
  bool has(int value, Point p) const;

  /// Points currently holding `value`, ascending.
  std::vector<Point> stratum(int value) const;
  std::size_t stratum_size(int value) const;
  std::size_t size() const noexcept { return values_.size(); }

  /// Distinct values present, ascending.
  std::vector<int> values() const;

private:
  std::string name_;
  std::unordered_map<Point, int> values_;
};

/// Mesh topology as a stratified DAG with CSR cone and support storage.
///
/// Constructed once through `from_cones`; afterwards the topology is
/// immutable and may be queried concurrently. Labels are the only
/// mutable attachment.
class Plex {
public:
  Plex() = default;

  /// Builds a plex from per-point cone lists. Supports are the exact dual
  /// of the cones, ordered by ascending covering point. Depth is the
  /// longest path to a cone-free point, and every depth stratum must
  /// occupy a contiguous id range.
  static Plex from_cones(Point chart_size, const std::vector<std::vector<Point>>& cones);

  Point chart_size() const noexcept { return static_cast<Point>(depth_.size()); }

  std::span<const Point> cone(Point p) const;
  std::span<const Point> support(Point p) const;

  /// Transitive closure of `cone`, ascending. The seed is excluded
  /// unless `include_self` is set.
  std::vector<Point> closure(Point p, bool include_self = false) const;

  /// Transitive closure of `support`, ascending.
  std::vector<Point> star(Point p, bool include_self = false) const;

  /// closure(star(p)) with p removed, ascending.
  std::vector<Point> adjacency(Point p) const;

  int depth(Point p) const;
  int max_depth() const noexcept { return max_depth_; }
  int height(Point p) const { return max_depth_ - depth(p); }

  PointRange depth_stratum(int d) const;
  PointRange height_stratum(int h) const;

  /// All strata in ascending chart order.
  std::span<const Stratum> strata() const noexcept { return strata_; }

  bool is_cell(Point p) const { return depth(p) == max_depth_; }
  PointRange cells() const { return height_stratum(0); }

  /// Returns the label with this name, creating it on first use.
  Label& label(std::string_view name);
  const Label* find_label(std::string_view name) const;
  const std::map<std::string, Label, std::less<>>& labels() const noexcept { return labels_; }

  /// Copy of the cone lists, suitable for feeding back into `from_cones`.
  std::vector<std::vector<Point>> cone_lists() const;

private:
  void check_point(Point p) const;

  std::vector<Point> cone_offsets_{0};
  std::vector<Point> cone_points_;
  std::vector<Point> support_offsets_{0};
  std::vector<Point> support_points_;
  std::vector<int> depth_;
  std::vector<Stratum> strata_;
  int max_depth_ = 0;
  std::map<std::string, Label, std::less<>> labels_;
};

} // namespace meshplex
