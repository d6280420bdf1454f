#include "meshplex/mesh.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <map>
#include <sstream>
#include <unordered_map>

#include "meshplex/error.hpp"

namespace meshplex {

std::span<const double> MeshGeometry::vertex_coordinates(Point vertex) const {
  const PointRange verts = plex.depth_stratum(0);
  require(verts.contains(vertex), ErrorCode::Range,
          "point " + std::to_string(vertex) + " is not a vertex");
  const auto gdim = static_cast<std::size_t>(geometric_dimension);
  return std::span<const double>(coordinates)
      .subspan(static_cast<std::size_t>(vertex - verts.start) * gdim, gdim);
}

const Label& MeshGeometry::boundary_labels() const {
  static const Label empty{std::string(kBoundaryLabel)};
  const Label* l = plex.find_label(kBoundaryLabel);
  return l ? *l : empty;
}

namespace {

struct KeyHash {
  template <std::size_t N>
  std::size_t operator()(const std::array<Point, N>& k) const noexcept {
    std::size_t h = 1469598103934665603ull;
    for (Point v : k) h = (h ^ static_cast<std::size_t>(v)) * 1099511628211ull;
    return h;
  }
};

template <std::size_t N>
std::array<Point, N> sorted_key(std::array<Point, N> k) {
  std::sort(k.begin(), k.end());
  return k;
}

// Entities of one dimension keyed by their sorted vertex tuple, numbered in
// first-encounter order.
template <std::size_t N>
class EntityTable {
public:
  Point find_or_add(const std::array<Point, N>& verts) {
    auto key = sorted_key(verts);
    auto [it, inserted] = index_.try_emplace(key, static_cast<Point>(keys_.size()));
    if (inserted) keys_.push_back(key);
    return it->second;
  }
  std::size_t size() const noexcept { return keys_.size(); }
  const std::array<Point, N>& key(std::size_t i) const { return keys_[i]; }

private:
  std::unordered_map<std::array<Point, N>, Point, KeyHash> index_;
  std::vector<std::array<Point, N>> keys_;
};

} // namespace

Plex interpolate_simplices(int cell_dimension, Point num_vertices,
                           std::span<const std::vector<Point>> cell_vertices) {
  require(cell_dimension == 2 || cell_dimension == 3, ErrorCode::Argument,
          "only triangle and tetrahedron meshes can be interpolated");
  const auto nc = static_cast<Point>(cell_vertices.size());
  const auto nvc = static_cast<std::size_t>(cell_dimension + 1);
  for (std::size_t c = 0; c < cell_vertices.size(); ++c) {
    const auto& cv = cell_vertices[c];
    require(cv.size() == nvc, ErrorCode::Topology,
            "cell " + std::to_string(c) + " has " + std::to_string(cv.size()) + " vertices, expected " +
                std::to_string(nvc));
    for (Point v : cv)
      require(v >= 0 && v < num_vertices, ErrorCode::Range,
              "cell " + std::to_string(c) + " references vertex " + std::to_string(v));
    auto s = cv;
    std::sort(s.begin(), s.end());
    require(std::adjacent_find(s.begin(), s.end()) == s.end(), ErrorCode::Topology,
            "cell " + std::to_string(c) + " repeats a vertex");
  }

  EntityTable<2> edges;
  std::vector<std::vector<Point>> cell_cone(static_cast<std::size_t>(nc));

  if (cell_dimension == 2) {
    for (std::size_t c = 0; c < cell_vertices.size(); ++c) {
      const auto& v = cell_vertices[c];
      // Edge i is opposite local vertex i
      cell_cone[c] = {edges.find_or_add({v[1], v[2]}), edges.find_or_add({v[0], v[2]}),
                      edges.find_or_add({v[0], v[1]})};
    }
    const Point ne = static_cast<Point>(edges.size());
    const Point edge0 = nc + num_vertices;
    std::vector<std::vector<Point>> cones(static_cast<std::size_t>(edge0 + ne));
    for (Point c = 0; c < nc; ++c) {
      auto& cone = cones[static_cast<std::size_t>(c)];
      for (Point e : cell_cone[static_cast<std::size_t>(c)]) cone.push_back(edge0 + e);
    }
    for (Point e = 0; e < ne; ++e) {
      const auto& k = edges.key(static_cast<std::size_t>(e));
      cones[static_cast<std::size_t>(edge0 + e)] = {nc + k[0], nc + k[1]};
    }
    return Plex::from_cones(edge0 + ne, cones);
  }

  EntityTable<3> facets;
  std::vector<std::array<Point, 3>> facet_cone;
  for (std::size_t c = 0; c < cell_vertices.size(); ++c) {
    const auto& v = cell_vertices[c];
    // Facet i is opposite local vertex i
    const std::array<std::array<Point, 3>, 4> local{{{v[1], v[2], v[3]},
                                                      {v[0], v[2], v[3]},
                                                      {v[0], v[1], v[3]},
                                                      {v[0], v[1], v[2]}}};
    for (const auto& f : local) {
      const std::size_t before = facets.size();
      const Point fid = facets.find_or_add(f);
      cell_cone[c].push_back(fid);
      if (facets.size() != before) {
        const auto k = sorted_key(f);
        facet_cone.push_back({edges.find_or_add({k[1], k[2]}), edges.find_or_add({k[0], k[2]}),
                              edges.find_or_add({k[0], k[1]})});
      }
    }
  }
  const Point nf = static_cast<Point>(facets.size());
  const Point ne = static_cast<Point>(edges.size());
  const Point facet0 = nc + num_vertices;
  const Point edge0 = facet0 + nf;
  std::vector<std::vector<Point>> cones(static_cast<std::size_t>(edge0 + ne));
  for (Point c = 0; c < nc; ++c)
    for (Point f : cell_cone[static_cast<std::size_t>(c)])
      cones[static_cast<std::size_t>(c)].push_back(facet0 + f);
  for (Point f = 0; f < nf; ++f)
    for (Point e : facet_cone[static_cast<std::size_t>(f)])
      cones[static_cast<std::size_t>(facet0 + f)].push_back(edge0 + e);
  for (Point e = 0; e < ne; ++e) {
    const auto& k = edges.key(static_cast<std::size_t>(e));
    cones[static_cast<std::size_t>(edge0 + e)] = {nc + k[0], nc + k[1]};
  }
  return Plex::from_cones(edge0 + ne, cones);
}

MeshGeometry unit_square_mesh(int nx, int ny) {
  require(nx >= 1 && ny >= 1, ErrorCode::Argument,
          "unit square needs at least one division per side, got " + std::to_string(nx) + "x" +
              std::to_string(ny));
  const Point stride = nx + 1;
  const Point nv = stride * (ny + 1);
  std::vector<std::vector<Point>> cells;
  cells.reserve(static_cast<std::size_t>(2 * nx * ny));
  for (Point j = 0; j < ny; ++j)
    for (Point i = 0; i < nx; ++i) {
      const Point v00 = j * stride + i;
      const Point v10 = v00 + 1;
      const Point v01 = v00 + stride;
      const Point v11 = v01 + 1;
      cells.push_back({v00, v10, v11});
      cells.push_back({v00, v11, v01});
    }

  MeshGeometry mesh;
  mesh.cell_dimension = 2;
  mesh.geometric_dimension = 2;
  mesh.plex = interpolate_simplices(2, nv, cells);
  mesh.coordinates.reserve(static_cast<std::size_t>(2 * nv));
  for (Point j = 0; j <= ny; ++j)
    for (Point i = 0; i <= nx; ++i) {
      mesh.coordinates.push_back(static_cast<double>(i) / nx);
      mesh.coordinates.push_back(static_cast<double>(j) / ny);
    }

  const Point v0 = mesh.plex.depth_stratum(0).start;
  Label& boundary = mesh.plex.label(kBoundaryLabel);
  for (Point e : mesh.plex.depth_stratum(1)) {
    auto verts = mesh.plex.cone(e);
    const Point a = verts[0] - v0, b = verts[1] - v0;
    const Point ia = a % stride, ja = a / stride, ib = b % stride, jb = b / stride;
    if (ia == 0 && ib == 0) boundary.set_value(e, kLeft);
    else if (ia == nx && ib == nx) boundary.set_value(e, kRight);
    else if (ja == 0 && jb == 0) boundary.set_value(e, kBottom);
    else if (ja == ny && jb == ny) boundary.set_value(e, kTop);
  }
  return mesh;
}

MeshGeometry reference_tet() {
  const std::vector<std::vector<Point>> cones{
      {5, 6, 7, 8},                                   // cell
      {},           {},           {},           {},   // vertices 1-4
      {9, 10, 11},  {10, 12, 13}, {11, 13, 14}, {9, 12, 14},
      {2, 3},       {1, 3},       {1, 2},       {3, 4},       {1, 4},       {2, 4},
  };
  MeshGeometry mesh;
  mesh.plex = Plex::from_cones(15, cones);
  mesh.cell_dimension = 3;
  mesh.geometric_dimension = 3;
  mesh.coordinates = {0.0, 0.0, 1.0,  // 1
                      0.0, 0.0, 0.0,  // 2
                      1.0, 0.0, 0.0,  // 3
                      0.0, 1.0, 0.0}; // 4
  mesh.plex.label(kBoundaryLabel);
  return mesh;
}

//-----------------------------------------------------------------------------
// Gmsh MSH 2.2 ASCII
//-----------------------------------------------------------------------------

namespace {

struct GmshElement {
  long id = 0;
  int type = 0;
  std::vector<long> tags;
  std::vector<long> nodes;
};

int gmsh_node_count(int type) {
  switch (type) {
  case 1: return 2;  // line
  case 2: return 3;  // triangle
  case 4: return 4;  // tetrahedron
  case 15: return 1; // point
  default: return -1;
  }
}

std::string trim(std::string s) {
  const auto ws = " \t\r\n";
  const auto b = s.find_first_not_of(ws);
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(ws);
  return s.substr(b, e - b + 1);
}

class GmshReader {
public:
  explicit GmshReader(std::istream& in) : in_(in) {}

  MeshGeometry read();

private:
  template <typename T>
  T next(const char* what) {
    T value{};
    if (!(in_ >> value))
      fail(ErrorCode::Format, std::string("malformed MSH file: could not read ") + what);
    return value;
  }
  void expect_end(const std::string& section);
  void read_format();
  void read_nodes();
  void read_elements();

  std::istream& in_;
  bool have_format_ = false, have_nodes_ = false, have_elements_ = false;
  std::vector<long> node_ids_;
  std::vector<std::array<double, 3>> node_xyz_;
  std::unordered_map<long, std::size_t> node_index_;
  std::vector<GmshElement> elements_;
};

void GmshReader::expect_end(const std::string& section) {
  std::string line;
  while (std::getline(in_, line)) {
    line = trim(line);
    if (line.empty()) continue;
    if (line == "$End" + section) return;
    fail(ErrorCode::Format, "expected $End" + section + ", found '" + line + "'");
  }
  fail(ErrorCode::Format, "missing $End" + section);
}

void GmshReader::read_format() {
  const auto version = next<std::string>("format version");
  const auto file_type = next<int>("file type");
  next<int>("data size");
  if (version != "2.2")
    fail(ErrorCode::Format, "unsupported MSH version '" + version + "' (only 2.2 ASCII is read)");
  if (file_type != 0) fail(ErrorCode::Format, "binary MSH files are not supported");
  expect_end("MeshFormat");
  have_format_ = true;
}

void GmshReader::read_nodes() {
  require(have_format_, ErrorCode::Format, "$Nodes before $MeshFormat");
  const auto n = next<long>("node count");
  require(n >= 0, ErrorCode::Format, "negative node count");
  for (long i = 0; i < n; ++i) {
    const auto id = next<long>("node id");
    std::array<double, 3> xyz{next<double>("x"), next<double>("y"), next<double>("z")};
    require(node_index_.emplace(id, node_ids_.size()).second, ErrorCode::Format,
            "duplicate node id " + std::to_string(id));
    node_ids_.push_back(id);
    node_xyz_.push_back(xyz);
  }
  expect_end("Nodes");
  have_nodes_ = true;
}

void GmshReader::read_elements() {
  require(have_nodes_, ErrorCode::Format, "$Elements before $Nodes");
  const auto n = next<long>("element count");
  require(n >= 0, ErrorCode::Format, "negative element count");
  for (long i = 0; i < n; ++i) {
    GmshElement el;
    el.id = next<long>("element id");
    el.type = next<int>("element type");
    const int nn = gmsh_node_count(el.type);
    if (nn < 0)
      fail(ErrorCode::Format, "unsupported element type code " + std::to_string(el.type) +
                                  " (element " + std::to_string(el.id) + ")");
    const auto ntags = next<int>("tag count");
    require(ntags >= 0, ErrorCode::Format, "negative tag count");
    for (int t = 0; t < ntags; ++t) el.tags.push_back(next<long>("tag"));
    for (int k = 0; k < nn; ++k) {
      const auto node = next<long>("element node");
      if (!node_index_.count(node))
        fail(ErrorCode::Integrity, "element " + std::to_string(el.id) +
                                       " references undefined node " + std::to_string(node));
      el.nodes.push_back(node);
    }
    elements_.push_back(std::move(el));
  }
  expect_end("Elements");
  have_elements_ = true;
}

MeshGeometry GmshReader::read() {
  std::string line;
  while (std::getline(in_, line)) {
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() != '$') fail(ErrorCode::Format, "unexpected line '" + line + "'");
    const std::string section = line.substr(1);
    if (section == "MeshFormat") read_format();
    else if (!have_format_) fail(ErrorCode::Format, "file does not start with $MeshFormat");
    else if (section == "Nodes") read_nodes();
    else if (section == "Elements") read_elements();
    else {
      // Unknown sections ($PhysicalNames, $NodeData, ...) are skipped
      const std::string end = "$End" + section;
      bool closed = false;
      while (std::getline(in_, line))
        if (trim(line) == end) {
          closed = true;
          break;
        }
      require(closed, ErrorCode::Format, "missing " + end);
    }
  }
  require(have_format_, ErrorCode::Format, "missing $MeshFormat section");
  require(have_nodes_, ErrorCode::Format, "missing $Nodes section");
  require(have_elements_, ErrorCode::Format, "missing $Elements section");

  int dim = 0;
  for (const auto& el : elements_) {
    if (el.type == 4) dim = 3;
    else if (el.type == 2) dim = std::max(dim, 2);
  }
  require(dim > 0, ErrorCode::Format, "no triangle or tetrahedron elements");
  const int cell_type = dim == 3 ? 4 : 2;
  const int facet_type = dim == 3 ? 2 : 1;

  // Only nodes used by cells become vertices, in $Nodes order
  std::vector<char> used(node_ids_.size(), 0);
  for (const auto& el : elements_)
    if (el.type == cell_type)
      for (long node : el.nodes) used[node_index_.at(node)] = 1;
  std::vector<Point> vertex_of(node_ids_.size(), -1);
  Point nv = 0;
  for (std::size_t i = 0; i < used.size(); ++i)
    if (used[i]) vertex_of[i] = nv++;

  std::vector<std::vector<Point>> cells;
  for (const auto& el : elements_) {
    if (el.type != cell_type) continue;
    std::vector<Point> cv;
    for (long node : el.nodes) cv.push_back(vertex_of[node_index_.at(node)]);
    cells.push_back(std::move(cv));
  }

  MeshGeometry mesh;
  mesh.cell_dimension = dim;
  mesh.plex = interpolate_simplices(dim, nv, cells);
  bool flat = dim == 2;
  for (std::size_t i = 0; i < used.size() && flat; ++i)
    if (used[i] && node_xyz_[i][2] != 0.0) flat = false;
  mesh.geometric_dimension = flat ? 2 : 3;
  for (std::size_t i = 0; i < used.size(); ++i)
    if (used[i])
      for (int k = 0; k < mesh.geometric_dimension; ++k) mesh.coordinates.push_back(node_xyz_[i][k]);

  // Facet lookup by sorted vertex set
  const Point nc = static_cast<Point>(cells.size());
  std::map<std::vector<Point>, Point> facet_of;
  for (Point f : mesh.plex.height_stratum(1)) {
    std::vector<Point> verts;
    for (Point q : mesh.plex.closure(f))
      if (mesh.plex.depth(q) == 0) verts.push_back(q);
    facet_of.emplace(std::move(verts), f);
  }

  Label& boundary = mesh.plex.label(kBoundaryLabel);
  for (const auto& el : elements_) {
    if (el.type != facet_type || el.tags.empty()) continue;
    std::vector<Point> verts;
    for (long node : el.nodes) {
      const Point v = vertex_of[node_index_.at(node)];
      if (v < 0)
        fail(ErrorCode::Integrity, "boundary element " + std::to_string(el.id) + " uses node " +
                                       std::to_string(node) + " that belongs to no cell");
      verts.push_back(nc + v);
    }
    std::sort(verts.begin(), verts.end());
    auto it = facet_of.find(verts);
    if (it == facet_of.end())
      fail(ErrorCode::Integrity,
           "boundary element " + std::to_string(el.id) + " does not match a mesh facet");
    boundary.set_value(it->second, static_cast<int>(el.tags.front()));
  }
  return mesh;
}

} // namespace

MeshGeometry read_gmsh(std::istream& in) { return GmshReader(in).read(); }

MeshGeometry read_gmsh_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorCode::Io, "cannot open '" + path + "'");
  return read_gmsh(in);
}

MeshGeometry mesh_from_source(std::string_view source) {
  auto ends_with = [&](std::string_view suffix) {
    return source.size() >= suffix.size() &&
           source.substr(source.size() - suffix.size()) == suffix;
  };
  if (ends_with(".msh")) return read_gmsh_file(std::string(source));
  if (source == "tet:reference") return reference_tet();
  if (source.rfind("square:", 0) == 0) {
    const std::string_view dims = source.substr(7);
    const auto x = dims.find('x');
    int nx = 0, ny = 0;
    bool ok = x != std::string_view::npos;
    if (ok) {
      auto r1 = std::from_chars(dims.data(), dims.data() + x, nx);
      auto r2 = std::from_chars(dims.data() + x + 1, dims.data() + dims.size(), ny);
      ok = r1.ec == std::errc{} && r1.ptr == dims.data() + x && r2.ec == std::errc{} &&
           r2.ptr == dims.data() + dims.size();
    }
    require(ok, ErrorCode::Argument, "malformed square spec '" + std::string(source) +
                                         "', expected square:NxM");
    return unit_square_mesh(nx, ny);
  }
  fail(ErrorCode::Argument, "unknown mesh source '" + std::string(source) +
                                "' (expected square:NxM, tet:reference or a .msh path)");
}

std::vector<Point> stratum_sizes(const Plex& plex) {
  std::vector<Point> sizes(static_cast<std::size_t>(plex.max_depth()) + 1, 0);
  for (const auto& s : plex.strata()) sizes[static_cast<std::size_t>(s.depth)] = s.points.size();
  return sizes;
}

long euler_characteristic(const Plex& plex) {
  long chi = 0;
  const auto sizes = stratum_sizes(plex);
  for (std::size_t d = 0; d < sizes.size(); ++d) chi += (d % 2 == 0 ? 1 : -1) * sizes[d];
  return chi;
}

} // namespace meshplex
