#include "meshplex/sparsity.hpp"

#include <algorithm>
#include <chrono>
#include <cstdlib>

#include "json.hpp"

#include "meshplex/error.hpp"

namespace meshplex {

bool SparsityPattern::contains(GlobalDof i, GlobalDof j) const {
  if (i < 0 || i >= n) return false;
  auto r = row(i);
  return std::binary_search(r.begin(), r.end(), j);
}

SparsityPattern SparsityPattern::from_entries(GlobalDof n,
                                              std::vector<std::pair<GlobalDof, GlobalDof>> entries) {
  for (const auto& [i, j] : entries)
    require(i >= 0 && i < n && j >= 0 && j < n, ErrorCode::Integrity,
            "entry (" + std::to_string(i) + ", " + std::to_string(j) + ") outside " +
                std::to_string(n) + " x " + std::to_string(n) + " pattern");
  std::sort(entries.begin(), entries.end());
  entries.erase(std::unique(entries.begin(), entries.end()), entries.end());
  SparsityPattern p;
  p.n = n;
  p.row_starts.assign(static_cast<std::size_t>(n) + 1, 0);
  p.col_indices.reserve(entries.size());
  for (const auto& [i, j] : entries) {
    ++p.row_starts[static_cast<std::size_t>(i) + 1];
    p.col_indices.push_back(j);
  }
  for (std::size_t i = 0; i < static_cast<std::size_t>(n); ++i) p.row_starts[i + 1] += p.row_starts[i];
  return p;
}

SparsityPattern SparsityPattern::identity(GlobalDof n) {
  std::vector<std::pair<GlobalDof, GlobalDof>> diag;
  for (GlobalDof i = 0; i < n; ++i) diag.emplace_back(i, i);
  return from_entries(n, std::move(diag));
}

SparsityPattern build_sparsity(std::span<const CellMap> cell_maps,
                               std::span<const std::vector<GlobalDof>> global_numbers, GlobalDof n) {
  require(cell_maps.size() == global_numbers.size(), ErrorCode::Argument,
          "need one global numbering per cell map");
  // Per-row column lists, merged at the end
  std::vector<std::vector<GlobalDof>> rows(static_cast<std::size_t>(n));
  std::vector<GlobalDof> g;
  for (std::size_t r = 0; r < cell_maps.size(); ++r) {
    const auto& map = cell_maps[r];
    const auto& gnum = global_numbers[r];
    for (std::size_t row = 0; row < map.num_rows(); ++row) {
      g.clear();
      for (LocalDof d : map.row(row)) {
        require(d >= 0 && static_cast<std::size_t>(d) < gnum.size(), ErrorCode::Integrity,
                "local DoF " + std::to_string(d) + " outside rank " + std::to_string(r) +
                    " numbering");
        const GlobalDof gi = gnum[static_cast<std::size_t>(d)];
        require(gi >= 0 && gi < n, ErrorCode::Integrity,
                "global DoF " + std::to_string(gi) + " outside [0, " + std::to_string(n) + ")");
        g.push_back(gi);
      }
      for (GlobalDof i : g) {
        auto& cols = rows[static_cast<std::size_t>(i)];
        cols.insert(cols.end(), g.begin(), g.end());
      }
    }
  }
  SparsityPattern p;
  p.n = n;
  p.row_starts.assign(static_cast<std::size_t>(n) + 1, 0);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    auto& cols = rows[i];
    std::sort(cols.begin(), cols.end());
    cols.erase(std::unique(cols.begin(), cols.end()), cols.end());
    p.row_starts[i + 1] = p.row_starts[i] + static_cast<std::int64_t>(cols.size());
  }
  p.col_indices.reserve(static_cast<std::size_t>(p.row_starts.back()));
  for (auto& cols : rows) p.col_indices.insert(p.col_indices.end(), cols.begin(), cols.end());
  return p;
}

OrderingReport metrics(const SparsityPattern& pattern) {
  OrderingReport report;
  report.nnz = pattern.nnz();
  for (GlobalDof i = 0; i < pattern.n; ++i) {
    auto r = pattern.row(i);
    if (r.empty()) continue;
    report.bandwidth = std::max({report.bandwidth, std::abs(i - r.front()), std::abs(r.back() - i)});
    report.profile += std::max<std::int64_t>(0, i - r.front());
  }
  return report;
}

std::string to_json(const OrderingReport& report) {
  nlohmann::ordered_json j;
  j["bandwidth"] = report.bandwidth;
  j["profile"] = report.profile;
  j["nnz"] = report.nnz;
  j["timings"] = nlohmann::ordered_json::object();
  for (const auto& [name, seconds] : report.timings) j["timings"][name] = seconds;
  return j.dump(2);
}

//-----------------------------------------------------------------------------
// Portraits
//-----------------------------------------------------------------------------

std::int64_t portrait_size(GlobalDof n) {
  constexpr std::int64_t kMaxPixels = 10000;
  if (n <= kMaxPixels) return n;
  const std::int64_t block = (n + kMaxPixels - 1) / kMaxPixels;
  return (n + block - 1) / block;
}

namespace {

// 0 = white, 1 = grey, 2 = black
std::vector<std::uint8_t> rasterize(const SparsityPattern& pattern,
                                    std::span<const GlobalDof> rank_bounds) {
  const std::int64_t size = portrait_size(pattern.n);
  const std::int64_t block = size == 0 ? 1 : (pattern.n + size - 1) / size;
  std::vector<std::uint8_t> img(static_cast<std::size_t>(size * size), 0);
  for (GlobalDof b : rank_bounds) {
    if (b <= 0 || b >= pattern.n) continue;
    const std::int64_t px = b / block;
    for (std::int64_t k = 0; k < size; ++k) {
      img[static_cast<std::size_t>(px * size + k)] = 1;
      img[static_cast<std::size_t>(k * size + px)] = 1;
    }
  }
  for (GlobalDof i = 0; i < pattern.n; ++i)
    for (GlobalDof j : pattern.row(i)) img[static_cast<std::size_t>((i / block) * size + j / block)] = 2;
  return img;
}

void check_stream(const std::ostream& out, const char* what) {
  if (!out) fail(ErrorCode::Io, std::string("failed to write ") + what);
}

} // namespace

void write_portrait_pbm(const SparsityPattern& pattern, std::ostream& out) {
  const std::int64_t size = portrait_size(pattern.n);
  const auto img = rasterize(pattern, {});
  out << "P4\n" << size << ' ' << size << '\n';
  const std::size_t row_bytes = static_cast<std::size_t>((size + 7) / 8);
  std::vector<char> row(row_bytes);
  for (std::int64_t i = 0; i < size; ++i) {
    std::fill(row.begin(), row.end(), 0);
    for (std::int64_t j = 0; j < size; ++j)
      if (img[static_cast<std::size_t>(i * size + j)] == 2)
        row[static_cast<std::size_t>(j / 8)] |= static_cast<char>(0x80u >> (j % 8));
    out.write(row.data(), static_cast<std::streamsize>(row.size()));
  }
  check_stream(out, "PBM portrait");
}

void write_portrait_pgm(const SparsityPattern& pattern, std::span<const GlobalDof> rank_bounds,
                        std::ostream& out) {
  const std::int64_t size = portrait_size(pattern.n);
  const auto img = rasterize(pattern, rank_bounds);
  out << "P5\n" << size << ' ' << size << "\n255\n";
  constexpr char kLevels[] = {static_cast<char>(255), static_cast<char>(128), static_cast<char>(0)};
  std::vector<char> row(static_cast<std::size_t>(size));
  for (std::int64_t i = 0; i < size; ++i) {
    for (std::int64_t j = 0; j < size; ++j) row[static_cast<std::size_t>(j)] = kLevels[img[static_cast<std::size_t>(i * size + j)]];
    out.write(row.data(), static_cast<std::streamsize>(row.size()));
  }
  check_stream(out, "PGM portrait");
}

void write_portrait(const SparsityPattern& pattern, std::ostream& out,
                    std::optional<std::span<const GlobalDof>> rank_bounds) {
  if (rank_bounds) write_portrait_pgm(pattern, *rank_bounds, out);
  else write_portrait_pbm(pattern, out);
}

std::set<std::pair<std::int64_t, std::int64_t>> read_portrait_pbm(std::istream& in) {
  std::string magic;
  std::int64_t w = 0, h = 0;
  if (!(in >> magic >> w >> h) || magic != "P4" || w < 0 || h < 0)
    fail(ErrorCode::Format, "not a binary PBM image");
  in.get(); // single whitespace before the raster
  std::set<std::pair<std::int64_t, std::int64_t>> black;
  const std::size_t row_bytes = static_cast<std::size_t>((w + 7) / 8);
  std::vector<char> row(row_bytes);
  for (std::int64_t i = 0; i < h; ++i) {
    if (!in.read(row.data(), static_cast<std::streamsize>(row_bytes)))
      fail(ErrorCode::Format, "PBM raster is truncated");
    for (std::int64_t j = 0; j < w; ++j)
      if (static_cast<unsigned char>(row[static_cast<std::size_t>(j / 8)]) & (0x80u >> (j % 8)))
        black.emplace(i, j);
  }
  return black;
}

//-----------------------------------------------------------------------------
// Assembly-loop benchmarks
//-----------------------------------------------------------------------------

namespace {

using Clock = std::chrono::steady_clock;

inline void cell_kernel(std::span<const LocalDof> dofs, std::span<const double> data,
                        std::vector<double>& out, double weight) {
  double sum = 0.0;
  for (LocalDof d : dofs) sum += data[static_cast<std::size_t>(d)];
  const double contribution = weight * sum;
  for (LocalDof d : dofs) out[static_cast<std::size_t>(d)] += contribution;
}

void check_data(const CellMap& map, std::span<const double> data) {
  for (LocalDof d : map.entries)
    require(d >= 0 && static_cast<std::size_t>(d) < data.size(), ErrorCode::Integrity,
            "cell map index " + std::to_string(d) + " outside data array of size " +
                std::to_string(data.size()));
}

} // namespace

BenchResult bench_cell_loop(const CellMap& map, std::span<const double> data, int repeats,
                            double weight) {
  require(repeats >= 1, ErrorCode::Argument, "repeats must be at least 1");
  check_data(map, data);
  BenchResult result;
  std::vector<double> scratch(data.size(), 0.0);
  for (std::size_t r = 0; r < map.num_rows(); ++r) cell_kernel(map.row(r), data, scratch, weight);

  result.values.assign(data.size(), 0.0);
  const auto t0 = Clock::now();
  for (int rep = 0; rep < repeats; ++rep)
    for (std::size_t r = 0; r < map.num_rows(); ++r) cell_kernel(map.row(r), data, result.values, weight);
  result.seconds = std::chrono::duration<double>(Clock::now() - t0).count();
  return result;
}

BenchResult bench_facet_loop(std::span<const InteriorFacet> facets, const CellMap& map,
                             std::span<const double> data, int repeats, double weight) {
  require(repeats >= 1, ErrorCode::Argument, "repeats must be at least 1");
  require(!facets.empty(), ErrorCode::Argument, "mesh has no interior facets");
  check_data(map, data);
  Point max_cell = 0;
  for (Point c : map.cells) max_cell = std::max(max_cell, c);
  const auto row_of = map.row_of_point(max_cell + 1);
  std::vector<std::size_t> rows;
  rows.reserve(facets.size());
  for (const auto& f : facets) {
    const bool ok = f.plus.cell >= 0 && f.plus.cell <= max_cell &&
                    row_of[static_cast<std::size_t>(f.plus.cell)] >= 0;
    require(ok, ErrorCode::Integrity, "facet " + std::to_string(f.facet) + " names cell " +
                                          std::to_string(f.plus.cell) + " missing from the cell map");
    rows.push_back(static_cast<std::size_t>(row_of[static_cast<std::size_t>(f.plus.cell)]));
  }

  BenchResult result;
  std::vector<double> scratch(data.size(), 0.0);
  for (std::size_t r : rows) cell_kernel(map.row(r), data, scratch, weight);

  result.values.assign(data.size(), 0.0);
  const auto t0 = Clock::now();
  for (int rep = 0; rep < repeats; ++rep)
    for (std::size_t r : rows) cell_kernel(map.row(r), data, result.values, weight);
  result.seconds = std::chrono::duration<double>(Clock::now() - t0).count();
  return result;
}

} // namespace meshplex
