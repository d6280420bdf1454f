#include "meshplex/plex.hpp"

#include <algorithm>
#include <deque>
#include <limits>

#include "meshplex/error.hpp"

namespace meshplex {

//-----------------------------------------------------------------------------
// Label
//-----------------------------------------------------------------------------

void Label::set_value(Point p, int value) { values_[p] = value; }

void Label::clear_value(Point p) { values_.erase(p); }

std::optional<int> Label::value(Point p) const {
  auto it = values_.find(p);
  if (it == values_.end()) return std::nullopt;
  return it->second;
}

bool Label::has(int value, Point p) const {
  auto it = values_.find(p);
  return it != values_.end() && it->second == value;
}

std::vector<Point> Label::stratum(int value) const {
  std::vector<Point> points;
  for (const auto& [p, v] : values_)
    if (v == value) points.push_back(p);
  std::sort(points.begin(), points.end());
  return points;
}

std::size_t Label::stratum_size(int value) const {
  return static_cast<std::size_t>(std::count_if(
      values_.begin(), values_.end(), [value](const auto& kv) { return kv.second == value; }));
}

std::vector<int> Label::values() const {
  std::vector<int> vals;
  for (const auto& kv : values_) vals.push_back(kv.second);
  std::sort(vals.begin(), vals.end());
  vals.erase(std::unique(vals.begin(), vals.end()), vals.end());
  return vals;
}

//-----------------------------------------------------------------------------
// Plex
//-----------------------------------------------------------------------------

Plex Plex::from_cones(Point chart_size, const std::vector<std::vector<Point>>& cones) {
  require(chart_size >= 0, ErrorCode::Argument, "negative chart size");
  require(static_cast<std::size_t>(chart_size) == cones.size(), ErrorCode::Argument,
          "expected " + std::to_string(chart_size) + " cone lists, got " +
              std::to_string(cones.size()));

  Plex plex;
  const auto n = static_cast<std::size_t>(chart_size);

  // Cones, CSR
  plex.cone_offsets_.assign(n + 1, 0);
  for (std::size_t p = 0; p < n; ++p) {
    const auto& c = cones[p];
    for (Point q : c)
      require(q >= 0 && q < chart_size, ErrorCode::Range,
              "cone of point " + std::to_string(p) + " references point " + std::to_string(q) +
                  " outside chart [0, " + std::to_string(chart_size) + ")");
    std::vector<Point> sorted(c.begin(), c.end());
    std::sort(sorted.begin(), sorted.end());
    require(std::adjacent_find(sorted.begin(), sorted.end()) == sorted.end(), ErrorCode::Topology,
            "cone of point " + std::to_string(p) + " lists a point twice");
    plex.cone_offsets_[p + 1] = plex.cone_offsets_[p] + static_cast<Point>(c.size());
  }
  plex.cone_points_.reserve(static_cast<std::size_t>(plex.cone_offsets_[n]));
  for (const auto& c : cones) plex.cone_points_.insert(plex.cone_points_.end(), c.begin(), c.end());

  // Supports as the exact dual, ascending by covering point
  plex.support_offsets_.assign(n + 1, 0);
  for (Point q : plex.cone_points_) ++plex.support_offsets_[static_cast<std::size_t>(q) + 1];
  for (std::size_t p = 0; p < n; ++p) plex.support_offsets_[p + 1] += plex.support_offsets_[p];
  plex.support_points_.resize(plex.cone_points_.size());
  {
    std::vector<Point> fill(plex.support_offsets_.begin(), plex.support_offsets_.end() - 1);
    for (std::size_t p = 0; p < n; ++p)
      for (Point q : cones[p]) plex.support_points_[static_cast<std::size_t>(fill[q]++)] =
          static_cast<Point>(p);
  }

  // Depth by topological sweep from cone-free points
  plex.depth_.assign(n, 0);
  std::vector<Point> pending(n);
  std::deque<Point> ready;
  for (std::size_t p = 0; p < n; ++p) {
    pending[p] = static_cast<Point>(cones[p].size());
    if (pending[p] == 0) ready.push_back(static_cast<Point>(p));
  }
  std::size_t processed = 0;
  while (!ready.empty()) {
    const Point q = ready.front();
    ready.pop_front();
    ++processed;
    for (Point s : plex.support(q)) {
      plex.depth_[s] = std::max(plex.depth_[s], plex.depth_[q] + 1);
      if (--pending[s] == 0) ready.push_back(s);
    }
  }
  if (processed != n) {
    Point culprit = 0;
    for (std::size_t p = 0; p < n; ++p)
      if (pending[p] > 0) {
        culprit = static_cast<Point>(p);
        break;
      }
    fail(ErrorCode::Topology, "cone relation has a cycle through point " + std::to_string(culprit));
  }

  plex.max_depth_ = 0;
  for (int d : plex.depth_) plex.max_depth_ = std::max(plex.max_depth_, d);

  for (std::size_t p = 0; p < n; ++p)
    for (Point q : cones[p])
      require(plex.depth_[q] == plex.depth_[p] - 1, ErrorCode::Topology,
              "point " + std::to_string(p) + " of depth " + std::to_string(plex.depth_[p]) +
                  " covers point " + std::to_string(q) + " of depth " +
                  std::to_string(plex.depth_[q]));

  // Strata must be contiguous id ranges
  const auto num_depths = static_cast<std::size_t>(plex.max_depth_) + 1;
  std::vector<Point> lo(num_depths, std::numeric_limits<Point>::max());
  std::vector<Point> hi(num_depths, -1);
  std::vector<Point> count(num_depths, 0);
  for (std::size_t p = 0; p < n; ++p) {
    const auto d = static_cast<std::size_t>(plex.depth_[p]);
    lo[d] = std::min(lo[d], static_cast<Point>(p));
    hi[d] = std::max(hi[d], static_cast<Point>(p));
    ++count[d];
  }
  for (std::size_t d = 0; d < num_depths && n > 0; ++d) {
    if (count[d] == 0) continue;
    if (hi[d] - lo[d] + 1 != count[d]) {
      Point culprit = lo[d];
      while (plex.depth_[culprit] == static_cast<int>(d)) ++culprit;
      fail(ErrorCode::Layout, "point " + std::to_string(culprit) + " of depth " +
                                  std::to_string(plex.depth_[culprit]) + " interrupts depth " +
                                  std::to_string(d) + " stratum spanning [" +
                                  std::to_string(lo[d]) + ", " + std::to_string(hi[d]) + "]");
    }
    plex.strata_.push_back({static_cast<int>(d), {lo[d], hi[d] + 1}});
  }
  std::sort(plex.strata_.begin(), plex.strata_.end(),
            [](const Stratum& a, const Stratum& b) { return a.points.start < b.points.start; });
  return plex;
}

void Plex::check_point(Point p) const {
  if (p < 0 || p >= chart_size())
    fail(ErrorCode::Range, "point " + std::to_string(p) + " outside chart [0, " +
                               std::to_string(chart_size()) + ")");
}

std::span<const Point> Plex::cone(Point p) const {
  check_point(p);
  const auto b = static_cast<std::size_t>(cone_offsets_[p]);
  const auto e = static_cast<std::size_t>(cone_offsets_[p + 1]);
  return std::span<const Point>(cone_points_).subspan(b, e - b);
}

std::span<const Point> Plex::support(Point p) const {
  check_point(p);
  const auto b = static_cast<std::size_t>(support_offsets_[p]);
  const auto e = static_cast<std::size_t>(support_offsets_[p + 1]);
  return std::span<const Point>(support_points_).subspan(b, e - b);
}

namespace {

template <typename Next>
std::vector<Point> transitive(Point seed, bool include_self, Next next) {
  std::vector<Point> out;
  std::vector<Point> frontier{seed};
  if (include_self) out.push_back(seed);
  // Strata are layered, so each level of the sweep is exactly one depth
  while (!frontier.empty()) {
    std::vector<Point> level;
    for (Point p : frontier)
      for (Point q : next(p)) level.push_back(q);
    std::sort(level.begin(), level.end());
    level.erase(std::unique(level.begin(), level.end()), level.end());
    out.insert(out.end(), level.begin(), level.end());
    frontier = std::move(level);
  }
  std::sort(out.begin(), out.end());
  return out;
}

} // namespace

std::vector<Point> Plex::closure(Point p, bool include_self) const {
  check_point(p);
  return transitive(p, include_self, [this](Point q) { return cone(q); });
}

std::vector<Point> Plex::star(Point p, bool include_self) const {
  check_point(p);
  return transitive(p, include_self, [this](Point q) { return support(q); });
}

std::vector<Point> Plex::adjacency(Point p) const {
  std::vector<Point> out;
  for (Point s : star(p, true)) {
    auto cl = closure(s, true);
    out.insert(out.end(), cl.begin(), cl.end());
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  out.erase(std::remove(out.begin(), out.end(), p), out.end());
  return out;
}

int Plex::depth(Point p) const {
  check_point(p);
  return depth_[static_cast<std::size_t>(p)];
}

PointRange Plex::depth_stratum(int d) const {
  for (const auto& s : strata_)
    if (s.depth == d) return s.points;
  fail(ErrorCode::Range, "no depth stratum " + std::to_string(d) + " (max depth " +
                             std::to_string(max_depth_) + ")");
}

PointRange Plex::height_stratum(int h) const {
  if (h < 0 || h > max_depth_)
    fail(ErrorCode::Range, "no height stratum " + std::to_string(h) + " (max depth " +
                               std::to_string(max_depth_) + ")");
  return depth_stratum(max_depth_ - h);
}

Label& Plex::label(std::string_view name) {
  auto it = labels_.find(name);
  if (it == labels_.end()) it = labels_.emplace(std::string(name), Label(std::string(name))).first;
  return it->second;
}

const Label* Plex::find_label(std::string_view name) const {
  auto it = labels_.find(name);
  return it == labels_.end() ? nullptr : &it->second;
}

std::vector<std::vector<Point>> Plex::cone_lists() const {
  std::vector<std::vector<Point>> out(static_cast<std::size_t>(chart_size()));
  for (Point p = 0; p < chart_size(); ++p) {
    auto c = cone(p);
    out[static_cast<std::size_t>(p)].assign(c.begin(), c.end());
  }
  return out;
}

} // namespace meshplex
