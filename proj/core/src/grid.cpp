#include "percoscan/grid.hpp"

#include <algorithm>
#include <stdexcept>

namespace percoscan {

namespace {

// Neighbor offsets in row-major order. The first/last entries are the
// triangular-lattice diagonal pair; the middle four are shared with Square4.
constexpr Coord kTriOffsets[6] = {
    {-1, -1}, {-1, 0}, {0, -1}, {0, 1}, {1, 0}, {1, 1},
};
constexpr Coord kSquareOffsets[4] = {
    {-1, 0}, {0, -1}, {0, 1}, {1, 0},
};

}  // namespace

std::vector<Coord> neighbors(Coord v, int side, LatticeKind lattice) {
  if (v.row < 0 || v.col < 0 || v.row >= side || v.col >= side)
    throw std::invalid_argument("neighbors: coordinate out of bounds");

  std::vector<Coord> out;
  out.reserve(6);
  auto push_in_bounds = [&](Coord d) {
    Coord w{v.row + d.row, v.col + d.col};
    if (w.row >= 0 && w.col >= 0 && w.row < side && w.col < side)
      out.push_back(w);
  };
  if (lattice == LatticeKind::Triangular6) {
    for (Coord d : kTriOffsets) push_in_bounds(d);
  } else {
    for (Coord d : kSquareOffsets) push_in_bounds(d);
  }
  return out;
}

std::vector<Cluster> find_black_clusters(const BinaryImage& img, std::uint64_t* work) {
  const int n = img.side();
  const std::size_t cells = static_cast<std::size_t>(n) * n;
  const bool tri = img.lattice() == LatticeKind::Triangular6;

  // label[i*n+j]: -1 unvisited/white, otherwise cluster id
  std::vector<std::int32_t> label(cells, -1);
  std::int32_t next_id = 0;
  std::uint64_t steps = cells;  // one scan per cell

  std::vector<Coord> stack;
  for (int si = 0; si < n; ++si) {
    for (int sj = 0; sj < n; ++sj) {
      const std::size_t sidx = static_cast<std::size_t>(si) * n + sj;
      if (!img.black(si, sj) || label[sidx] >= 0) continue;

      const std::int32_t id = next_id++;
      label[sidx] = id;
      stack.push_back({si, sj});
      while (!stack.empty()) {
        const Coord v = stack.back();
        stack.pop_back();
        auto visit = [&](int i, int j) {
          ++steps;
          if (i < 0 || j < 0 || i >= n || j >= n) return;
          const std::size_t k = static_cast<std::size_t>(i) * n + j;
          if (label[k] >= 0 || !img.black(i, j)) return;
          label[k] = id;
          stack.push_back({i, j});
        };
        visit(v.row - 1, v.col);
        visit(v.row + 1, v.col);
        visit(v.row, v.col - 1);
        visit(v.row, v.col + 1);
        if (tri) {
          visit(v.row - 1, v.col - 1);
          visit(v.row + 1, v.col + 1);
        }
      }
    }
  }
  if (work) *work += steps;

  // second pass in row-major order: pixel lists come out row-major sorted
  std::vector<Cluster> clusters(static_cast<std::size_t>(next_id));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      const std::int32_t id = label[static_cast<std::size_t>(i) * n + j];
      if (id >= 0) clusters[static_cast<std::size_t>(id)].pixels.push_back({i, j});
    }

  std::sort(clusters.begin(), clusters.end(), [](const Cluster& a, const Cluster& b) {
    if (a.size() != b.size()) return a.size() > b.size();
    return a.pixels.front() < b.pixels.front();
  });
  return clusters;
}

std::size_t largest_cluster_size(const BinaryImage& img) {
  const int n = img.side();
  const std::size_t cells = static_cast<std::size_t>(n) * n;
  const bool tri = img.lattice() == LatticeKind::Triangular6;

  std::vector<std::uint8_t> seen(cells, 0);
  std::vector<Coord> stack;
  std::size_t best = 0;
  for (int si = 0; si < n; ++si) {
    for (int sj = 0; sj < n; ++sj) {
      const std::size_t sidx = static_cast<std::size_t>(si) * n + sj;
      if (!img.black(si, sj) || seen[sidx]) continue;
      seen[sidx] = 1;
      stack.push_back({si, sj});
      std::size_t count = 0;
      while (!stack.empty()) {
        const Coord v = stack.back();
        stack.pop_back();
        ++count;
        auto visit = [&](int i, int j) {
          if (i < 0 || j < 0 || i >= n || j >= n) return;
          const std::size_t k = static_cast<std::size_t>(i) * n + j;
          if (seen[k] || !img.black(i, j)) return;
          seen[k] = 1;
          stack.push_back({i, j});
        };
        visit(v.row - 1, v.col);
        visit(v.row + 1, v.col);
        visit(v.row, v.col - 1);
        visit(v.row, v.col + 1);
        if (tri) {
          visit(v.row - 1, v.col - 1);
          visit(v.row + 1, v.col + 1);
        }
      }
      best = std::max(best, count);
    }
  }
  return best;
}

}  // namespace percoscan
