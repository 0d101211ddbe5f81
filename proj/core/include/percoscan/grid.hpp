#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "percoscan/image.hpp"

namespace percoscan {

/// Connected set of black pixels. Pixels are stored in row-major order;
/// clusters returned by find_black_clusters are maximal and disjoint.
struct Cluster {
  std::vector<Coord> pixels;

  std::size_t size() const { return pixels.size(); }
};

/// In-bounds lattice neighbors of v on an n-by-n grid, in row-major order.
/// Square4: (i±1,j), (i,j±1). Triangular6 additionally: (i-1,j-1), (i+1,j+1).
/// Throws std::invalid_argument if v is out of bounds.
std::vector<Coord> neighbors(Coord v, int side, LatticeKind lattice);

/// All maximal black clusters of img, found with an explicit-stack DFS in one
/// pass. Sorted by size descending, ties broken by row-major first pixel.
/// When `work` is given it is incremented once per cell scanned and once per
/// neighbor examined (for the complexity experiments).
std::vector<Cluster> find_black_clusters(const BinaryImage& img,
                                         std::uint64_t* work = nullptr);

/// Size of the largest black cluster, 0 for an all-white image.
std::size_t largest_cluster_size(const BinaryImage& img);

/// Site-percolation threshold on the triangular lattice. Used only by the
/// phase-check experiments.
inline constexpr double kTriangularSiteCriticalP = 0.5;

}  // namespace percoscan
