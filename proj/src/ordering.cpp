#include "meshplex/ordering.hpp"

#include <algorithm>
#include <deque>
#include <sstream>
#include <string>

#include "meshplex/error.hpp"

namespace meshplex {

std::vector<Point> Permutation::old_of_new() const {
  std::vector<Point> inv(new_of_old.size());
  for (std::size_t p = 0; p < new_of_old.size(); ++p)
    inv[static_cast<std::size_t>(new_of_old[p])] = static_cast<Point>(p);
  return inv;
}

Permutation Permutation::identity(Point n) {
  Permutation perm;
  perm.new_of_old.resize(static_cast<std::size_t>(n));
  for (Point p = 0; p < n; ++p) perm.new_of_old[static_cast<std::size_t>(p)] = p;
  perm.segment_bounds = {0, n, n, n};
  return perm;
}

void check_bijection(std::span<const Point> perm, Point n) {
  require(perm.size() == static_cast<std::size_t>(n), ErrorCode::Argument,
          "permutation has " + std::to_string(perm.size()) + " entries, chart has " +
              std::to_string(n));
  std::vector<char> seen(perm.size(), 0);
  for (std::size_t i = 0; i < perm.size(); ++i) {
    const Point v = perm[i];
    require(v >= 0 && v < n && !seen[static_cast<std::size_t>(v)], ErrorCode::Argument,
            "permutation is not a bijection: entry " + std::to_string(i) + " maps to " +
                std::to_string(v));
    seen[static_cast<std::size_t>(v)] = 1;
  }
}

//-----------------------------------------------------------------------------
// Cell orderings
//-----------------------------------------------------------------------------

std::vector<std::vector<Point>> cell_vertex_graph(const Plex& plex) {
  const PointRange cells = plex.cells();
  std::vector<std::vector<Point>> graph(static_cast<std::size_t>(cells.size()));
  if (plex.max_depth() == 0) return graph;
  for (Point v : plex.depth_stratum(0)) {
    std::vector<Point> around;
    for (Point s : plex.star(v))
      if (cells.contains(s)) around.push_back(s - cells.start);
    for (Point a : around)
      for (Point b : around)
        if (a != b) graph[static_cast<std::size_t>(a)].push_back(b);
  }
  for (auto& nbrs : graph) {
    std::sort(nbrs.begin(), nbrs.end());
    nbrs.erase(std::unique(nbrs.begin(), nbrs.end()), nbrs.end());
  }
  return graph;
}

namespace {

// Breadth-first levels from `start`; -1 marks unreached cells.
std::vector<int> bfs_levels(const std::vector<std::vector<Point>>& graph, Point start) {
  std::vector<int> level(graph.size(), -1);
  std::deque<Point> queue{start};
  level[static_cast<std::size_t>(start)] = 0;
  while (!queue.empty()) {
    const Point c = queue.front();
    queue.pop_front();
    for (Point nb : graph[static_cast<std::size_t>(c)])
      if (level[static_cast<std::size_t>(nb)] < 0) {
        level[static_cast<std::size_t>(nb)] = level[static_cast<std::size_t>(c)] + 1;
        queue.push_back(nb);
      }
  }
  return level;
}

Point farthest(const std::vector<int>& level) {
  Point best = 0;
  for (std::size_t c = 0; c < level.size(); ++c)
    if (level[c] > level[static_cast<std::size_t>(best)]) best = static_cast<Point>(c);
  return best;
}

} // namespace

std::vector<Point> cuthill_mckee_ordering(const Plex& plex) {
  require(plex.chart_size() > 0, ErrorCode::Argument, "cannot order an empty mesh");
  const PointRange cells = plex.cells();
  const auto graph = cell_vertex_graph(plex);
  const auto n = graph.size();

  std::vector<char> visited(n, 0);
  std::vector<Point> order;
  order.reserve(n);
  for (std::size_t lowest = 0; lowest < n; ++lowest) {
    if (visited[lowest]) continue;
    // Pseudo-peripheral start: two farthest-cell sweeps
    Point start = farthest(bfs_levels(graph, static_cast<Point>(lowest)));
    start = farthest(bfs_levels(graph, start));

    std::deque<Point> queue{start};
    visited[static_cast<std::size_t>(start)] = 1;
    while (!queue.empty()) {
      const Point c = queue.front();
      queue.pop_front();
      order.push_back(cells.start + c);
      std::vector<Point> next;
      for (Point nb : graph[static_cast<std::size_t>(c)])
        if (!visited[static_cast<std::size_t>(nb)]) {
          visited[static_cast<std::size_t>(nb)] = 1;
          next.push_back(nb);
        }
      std::sort(next.begin(), next.end(), [&](Point a, Point b) {
        const auto da = graph[static_cast<std::size_t>(a)].size();
        const auto db = graph[static_cast<std::size_t>(b)].size();
        return da != db ? da < db : a < b;
      });
      queue.insert(queue.end(), next.begin(), next.end());
    }
  }
  return order;
}

std::vector<Point> rcm_ordering(const Plex& plex) {
  auto order = cuthill_mckee_ordering(plex);
  std::reverse(order.begin(), order.end());
  return order;
}

std::vector<Point> native_cell_ordering(const Plex& plex) {
  require(plex.chart_size() > 0, ErrorCode::Argument, "cannot order an empty mesh");
  std::vector<Point> order;
  for (Point c : plex.cells()) order.push_back(c);
  return order;
}

std::vector<Point> shuffled_cell_ordering(const Plex& plex, std::uint64_t seed) {
  auto order = native_cell_ordering(plex);
  std::uint64_t state = seed;
  auto next = [&state]() {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ull);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  };
  for (std::size_t i = order.size(); i > 1; --i) {
    const std::uint64_t bound = i;
    const std::uint64_t threshold = (0 - bound) % bound;
    std::uint64_t r = next();
    while (r < threshold) r = next();
    std::swap(order[i - 1], order[static_cast<std::size_t>(r % bound)]);
  }
  return order;
}

//-----------------------------------------------------------------------------
// Compact class permutation
//-----------------------------------------------------------------------------

Permutation compact_class_permutation(const LocalMesh& local, std::span<const Point> cell_order) {
  const Plex& plex = local.plex;
  const PointRange cells = plex.cells();
  require(cell_order.size() == static_cast<std::size_t>(cells.size()), ErrorCode::Argument,
          "cell ordering lists " + std::to_string(cell_order.size()) + " cells, mesh has " +
              std::to_string(cells.size()));
  {
    std::vector<char> seen(static_cast<std::size_t>(cells.size()), 0);
    for (Point c : cell_order) {
      require(cells.contains(c) && !seen[static_cast<std::size_t>(c - cells.start)],
              ErrorCode::Argument, "cell ordering is not a permutation of the cells (point " +
                                       std::to_string(c) + ")");
      seen[static_cast<std::size_t>(c - cells.start)] = 1;
    }
  }

  const auto n = static_cast<std::size_t>(plex.chart_size());
  std::vector<int> cls(n);
  std::array<Point, 3> counts{0, 0, 0};
  for (std::size_t p = 0; p < n; ++p) {
    cls[p] = static_cast<int>(local.entity_class(static_cast<Point>(p)));
    ++counts[static_cast<std::size_t>(cls[p])];
  }

  Permutation perm;
  perm.segment_bounds = {0, counts[0], counts[0] + counts[1], counts[0] + counts[1] + counts[2]};
  std::array<Point, 3> next{perm.segment_bounds[0], perm.segment_bounds[1], perm.segment_bounds[2]};
  perm.new_of_old.assign(n, -1);
  auto place = [&](Point q) {
    auto& slot = perm.new_of_old[static_cast<std::size_t>(q)];
    if (slot < 0) slot = next[static_cast<std::size_t>(cls[static_cast<std::size_t>(q)])]++;
  };
  for (Point c : cell_order)
    for (Point q : plex.closure(c, true)) place(q);
  for (std::size_t p = 0; p < n; ++p) place(static_cast<Point>(p));
  return perm;
}

//-----------------------------------------------------------------------------
// Permuted view
//-----------------------------------------------------------------------------

PermutedPlex::PermutedPlex(const Plex& base, Permutation perm)
    : base_(&base), perm_(std::move(perm)) {
  check_bijection(perm_.new_of_old, base.chart_size());
  old_of_new_ = perm_.old_of_new();
  for (const auto& [name, label] : base.labels()) {
    Label renamed{name};
    for (Point p = 0; p < base.chart_size(); ++p)
      if (auto v = label.value(p)) renamed.set_value(to_new(p), *v);
    labels_.emplace(name, std::move(renamed));
  }
}

Point PermutedPlex::to_new(Point old_id) const {
  require(old_id >= 0 && old_id < chart_size(), ErrorCode::Range,
          "point " + std::to_string(old_id) + " outside chart");
  return perm_.new_of_old[static_cast<std::size_t>(old_id)];
}

Point PermutedPlex::to_old(Point new_id) const {
  require(new_id >= 0 && new_id < chart_size(), ErrorCode::Range,
          "point " + std::to_string(new_id) + " outside chart");
  return old_of_new_[static_cast<std::size_t>(new_id)];
}

std::vector<Point> PermutedPlex::rename(std::span<const Point> old_ids, bool sort) const {
  std::vector<Point> out;
  out.reserve(old_ids.size());
  for (Point p : old_ids) out.push_back(perm_.new_of_old[static_cast<std::size_t>(p)]);
  if (sort) std::sort(out.begin(), out.end());
  return out;
}

std::vector<Point> PermutedPlex::cone(Point p) const { return rename(base_->cone(to_old(p)), false); }

std::vector<Point> PermutedPlex::support(Point p) const {
  return rename(base_->support(to_old(p)), false);
}

std::vector<Point> PermutedPlex::closure(Point p, bool include_self) const {
  return rename(base_->closure(to_old(p), include_self), true);
}

std::vector<Point> PermutedPlex::star(Point p, bool include_self) const {
  return rename(base_->star(to_old(p), include_self), true);
}

std::vector<Point> PermutedPlex::adjacency(Point p) const {
  return rename(base_->adjacency(to_old(p)), true);
}

int PermutedPlex::depth(Point p) const { return base_->depth(to_old(p)); }

std::vector<Point> PermutedPlex::depth_stratum(int d) const {
  const PointRange r = base_->depth_stratum(d);
  std::vector<Point> old_ids(r.begin(), r.end());
  return rename(old_ids, true);
}

std::vector<Point> PermutedPlex::height_stratum(int h) const {
  require(h >= 0 && h <= max_depth(), ErrorCode::Range, "no height stratum " + std::to_string(h));
  return depth_stratum(max_depth() - h);
}

const Label& PermutedPlex::label(std::string_view name) const {
  auto it = labels_.find(name);
  if (it == labels_.end()) fail(ErrorCode::Argument, "no label named '" + std::string(name) + "'");
  return it->second;
}

PermutedPlex apply_permutation(const Plex& plex, Permutation perm) {
  return PermutedPlex(plex, std::move(perm));
}

//-----------------------------------------------------------------------------
// CSV
//-----------------------------------------------------------------------------

void write_permutation_csv(const Permutation& perm, std::ostream& out) {
  const auto& b = perm.segment_bounds;
  out << "core," << b[0] << ',' << b[1] << '\n';
  out << "non_core," << b[1] << ',' << b[2] << '\n';
  out << "halo," << b[2] << ',' << b[3] << '\n';
  for (std::size_t p = 0; p < perm.new_of_old.size(); ++p) out << p << ',' << perm.new_of_old[p] << '\n';
  if (!out) fail(ErrorCode::Io, "failed to write permutation CSV");
}

Permutation read_permutation_csv(std::istream& in) {
  Permutation perm;
  const char* names[] = {"core", "non_core", "halo"};
  std::string line;
  for (int s = 0; s < 3; ++s) {
    if (!std::getline(in, line)) fail(ErrorCode::Format, "permutation CSV header is truncated");
    const std::string prefix = std::string(names[s]) + ",";
    require(line.rfind(prefix, 0) == 0, ErrorCode::Format,
            "expected segment '" + std::string(names[s]) + "', got '" + line + "'");
    std::istringstream row(line.substr(prefix.size()));
    Point lo = 0, hi = 0;
    char comma = 0;
    if (!(row >> lo >> comma >> hi) || comma != ',')
      fail(ErrorCode::Format, "bad segment line '" + line + "'");
    require(lo == perm.segment_bounds[static_cast<std::size_t>(s)], ErrorCode::Format,
            "segments are not contiguous at '" + line + "'");
    perm.segment_bounds[static_cast<std::size_t>(s) + 1] = hi;
  }
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream row(line);
    Point old_id = 0, new_id = 0;
    char comma = 0;
    if (!(row >> old_id >> comma >> new_id) || comma != ',')
      fail(ErrorCode::Format, "bad permutation row '" + line + "'");
    require(static_cast<std::size_t>(old_id) == perm.new_of_old.size(), ErrorCode::Format,
            "permutation rows must be listed by ascending old id");
    perm.new_of_old.push_back(new_id);
  }
  check_bijection(perm.new_of_old, perm.size());
  require(perm.segment_bounds[3] == perm.size(), ErrorCode::Format,
          "segment bounds do not cover the permutation");
  return perm;
}

} // namespace meshplex
