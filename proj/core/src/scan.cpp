#include "percoscan/scan.hpp"

#include <stdexcept>

namespace percoscan {

namespace {

// Kahan accumulator; Plain mode uses it with the compensation elided.
template <bool Compensated>
struct Accumulator {
  double sum = 0.0;
  double carry = 0.0;

  void add(double x) {
    if constexpr (Compensated) {
      const double y = x - carry;
      const double t = sum + y;
      carry = (t - sum) - y;
      sum = t;
    } else {
      sum += x;
    }
  }
};

template <bool Compensated>
WindowSums compute_sums(const Image& img, int w, OpCount* ops) {
  const int n = img.side();
  const int m = n - w + 1;
  WindowSums out;
  out.window = w;
  out.positions = m;
  out.sums.resize(static_cast<std::size_t>(m) * m);

  if (w == 1) {  // identity; no accumulation, keeps sums bit-exact
    std::copy(img.values().begin(), img.values().end(), out.sums.begin());
    return out;
  }

  std::uint64_t updates = 0;
  const auto v = img.values();
  auto px = [&](int i, int j) { return v[static_cast<std::size_t>(i) * n + j]; };

  // Phase 1: sums over w vertically-consecutive pixels, one running
  // accumulator per image column.
  std::vector<double> colsum(static_cast<std::size_t>(m) * n);
  for (int j = 0; j < n; ++j) {
    Accumulator<Compensated> acc;
    acc.add(px(0, j));
    for (int i = 1; i < w; ++i) {
      acc.add(px(i, j));
      ++updates;
    }
    colsum[j] = acc.sum;
    for (int r = 1; r < m; ++r) {
      acc.add(px(r + w - 1, j) - px(r - 1, j));
      ++updates;
      colsum[static_cast<std::size_t>(r) * n + j] = acc.sum;
    }
  }

  // Phase 2: slide a w-column accumulator along each row of column sums.
  for (int r = 0; r < m; ++r) {
    const double* row = &colsum[static_cast<std::size_t>(r) * n];
    double* dst = &out.sums[static_cast<std::size_t>(r) * m];
    Accumulator<Compensated> acc;
    acc.add(row[0]);
    for (int c = 1; c < w; ++c) {
      acc.add(row[c]);
      ++updates;
    }
    dst[0] = acc.sum;
    for (int c = 1; c < m; ++c) {
      acc.add(row[c + w - 1] - row[c - 1]);
      ++updates;
      dst[c] = acc.sum;
    }
  }

  if (ops) ops->updates += updates;
  return out;
}

enum class Pick { Min, Max };

ScanEstimate pick_window(const Image& img, int w, Pick pick, OpCount* ops) {
  const WindowSums sums = sliding_window_sums(img, w, ops);
  const int m = sums.positions;
  int best_r = 0, best_c = 0;
  double best = sums.at(0, 0);
  for (int r = 0; r < m; ++r)
    for (int c = 0; c < m; ++c) {
      const double s = sums.at(r, c);
      const bool better = pick == Pick::Min ? s < best : s > best;
      if (better) {
        best = s;
        best_r = r;
        best_c = c;
      }
    }
  return {best / (static_cast<double>(w) * w), w, {best_r, best_c}};
}

void check_window(const Image& img, Coord origin, int side) {
  if (side < 1 || origin.row < 0 || origin.col < 0 ||
      origin.row + side > img.side() || origin.col + side > img.side())
    throw std::invalid_argument("window out of bounds");
}

}  // namespace

WindowSums sliding_window_sums(const Image& img, int w, OpCount* ops, Summation mode) {
  if (w < 1 || w > img.side())
    throw std::invalid_argument("sliding_window_sums: window side out of range");
  return mode == Summation::Compensated ? compute_sums<true>(img, w, ops)
                                        : compute_sums<false>(img, w, ops);
}

ScanEstimate estimate_background(const Image& img, int w, OpCount* ops) {
  if (w < 1 || w > img.side())
    throw std::invalid_argument("estimate_background: window side out of range");
  return pick_window(img, w, Pick::Min, ops);
}

ScanEstimate estimate_object(const Image& img, int w, OpCount* ops) {
  if (w < 1 || w > img.side())
    throw std::invalid_argument("estimate_object: window side out of range");
  return pick_window(img, w, Pick::Max, ops);
}

double estimate_noise_variance(const Image& img, Coord origin, int side) {
  check_window(img, origin, side);
  if (side < 2)
    throw std::invalid_argument("estimate_noise_variance: window side must be >= 2");

  const std::size_t count = static_cast<std::size_t>(side) * side;
  double mean = 0.0;
  for (int i = 0; i < side; ++i)
    for (int j = 0; j < side; ++j) mean += img.at(origin.row + i, origin.col + j);
  mean /= static_cast<double>(count);

  double ss = 0.0;
  for (int i = 0; i < side; ++i)
    for (int j = 0; j < side; ++j) {
      const double d = img.at(origin.row + i, origin.col + j) - mean;
      ss += d * d;
    }
  return ss / static_cast<double>(count - 1);
}

double empirical_distribution(const Image& img, Coord origin, int side, double t) {
  check_window(img, origin, side);
  std::size_t count = 0;
  for (int i = 0; i < side; ++i)
    for (int j = 0; j < side; ++j)
      if (img.at(origin.row + i, origin.col + j) <= t) ++count;
  return static_cast<double>(count) / (static_cast<double>(side) * side);
}

double naive_mean(const Image& img) {
  double sum = 0.0;
  for (double v : img.values()) sum += v;
  return sum / static_cast<double>(img.pixel_count());
}

}  // namespace percoscan
