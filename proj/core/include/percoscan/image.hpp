#pragma once

#include <cmath>
#include <compare>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

namespace percoscan {

/// Pixel coordinate, (row, col), 0-based.
struct Coord {
  int row = 0;
  int col = 0;

  friend auto operator<=>(const Coord&, const Coord&) = default;
};

/// Pixel adjacency used when clustering a thresholded image.
/// Square4: the 4 axis neighbors. Triangular6: additionally the
/// (+1,+1)/(-1,-1) diagonal pair, giving a 6-regular embedding of the
/// triangular lattice on the square pixel grid.
enum class LatticeKind { Square4, Triangular6 };

/// Square grid of real-valued intensities.
class Image {
 public:
  Image() = default;

  explicit Image(int side, double fill = 0.0) : n_(side) {
    if (side <= 0) throw std::invalid_argument("Image: side must be positive");
    if (!std::isfinite(fill)) throw std::invalid_argument("Image: non-finite fill");
    v_.assign(static_cast<std::size_t>(side) * side, fill);
  }

  /// Takes ownership of a row-major value buffer. All values must be finite.
  static Image from_values(int side, std::vector<double> values) {
    Image img;
    if (side <= 0) throw std::invalid_argument("Image: side must be positive");
    if (values.size() != static_cast<std::size_t>(side) * side)
      throw std::invalid_argument("Image: value count != side*side");
    for (double v : values)
      if (!std::isfinite(v)) throw std::invalid_argument("Image: non-finite value");
    img.n_ = side;
    img.v_ = std::move(values);
    return img;
  }

  int side() const { return n_; }
  std::size_t pixel_count() const { return v_.size(); }

  double at(int i, int j) const { return v_[idx(i, j)]; }
  double& at(int i, int j) { return v_[idx(i, j)]; }

  std::span<const double> values() const { return v_; }
  std::span<double> values() { return v_; }

 private:
  std::size_t idx(int i, int j) const {
    return static_cast<std::size_t>(i) * n_ + j;
  }

  int n_ = 0;
  std::vector<double> v_;
};

/// Thresholded picture: boolean grid plus the lattice its clusters live on.
class BinaryImage {
 public:
  BinaryImage() = default;

  explicit BinaryImage(int side, LatticeKind lattice = LatticeKind::Triangular6,
                       bool fill = false)
      : n_(side), lattice_(lattice) {
    if (side <= 0) throw std::invalid_argument("BinaryImage: side must be positive");
    bits_.assign(static_cast<std::size_t>(side) * side, fill ? 1 : 0);
  }

  int side() const { return n_; }
  LatticeKind lattice() const { return lattice_; }

  bool black(int i, int j) const { return bits_[idx(i, j)] != 0; }
  void set(int i, int j, bool black) { bits_[idx(i, j)] = black ? 1 : 0; }

  std::size_t black_count() const {
    std::size_t c = 0;
    for (auto b : bits_) c += b;
    return c;
  }

  std::span<const std::uint8_t> bits() const { return bits_; }

 private:
  std::size_t idx(int i, int j) const {
    return static_cast<std::size_t>(i) * n_ + j;
  }

  int n_ = 0;
  LatticeKind lattice_ = LatticeKind::Triangular6;
  std::vector<std::uint8_t> bits_;
};

}  // namespace percoscan
