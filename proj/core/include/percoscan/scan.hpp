#pragma once

#include <cstdint>
#include <vector>

#include "percoscan/image.hpp"

namespace percoscan {

/// All w-by-w window sums of an image, indexed by window origin.
/// positions = side - w + 1 per axis.
struct WindowSums {
  int window = 0;
  int positions = 0;
  std::vector<double> sums;

  double at(int r, int c) const {
    return sums[static_cast<std::size_t>(r) * positions + c];
  }
};

/// Value and location of a window-mean estimate.
struct ScanEstimate {
  double value = 0.0;
  int window_side = 0;
  Coord origin;
};

/// Work counter for the sliding-window construction. `updates` counts
/// incremental accumulator updates: building an initial w-term sum counts
/// w-1 updates (one per added element), and each slide step counts 1 update
/// (one element enters, one leaves -- a single constant-cost operation).
/// Per-update cost is independent of the window side, which is what the
/// complexity experiments instrument.
struct OpCount {
  std::uint64_t updates = 0;
};

enum class Summation {
  Plain,        // fixed-order plain accumulation (default; ~1e-9 relative)
  Compensated,  // Kahan-compensated accumulators
};

/// Every window sum via the column-then-row incremental scheme: running
/// vertical sums of w consecutive rows per column, then a horizontal slide
/// over those column sums. For w >= 2 the update count is exactly
/// (side + positions)*(side - 1), independent of w up to the boundary
/// shrinkage of `positions`; w == 1 is the identity and costs nothing.
/// Throws std::invalid_argument unless 1 <= w <= side.
WindowSums sliding_window_sums(const Image& img, int w, OpCount* ops = nullptr,
                               Summation mode = Summation::Plain);

/// Background intensity estimate: mean of the minimum-sum window among all
/// w-by-w windows, row-major first on ties.
ScanEstimate estimate_background(const Image& img, int w, OpCount* ops = nullptr);

/// Object intensity estimate: mean of the maximum-sum window, row-major
/// first on ties.
ScanEstimate estimate_object(const Image& img, int w, OpCount* ops = nullptr);

/// Sample variance over the given window using that window's own mean and
/// divisor side^2 - 1. Throws for windows smaller than 2x2 or out of bounds.
double estimate_noise_variance(const Image& img, Coord origin, int side);

/// Empirical distribution function of the window's values at t:
/// fraction of values <= t.
double empirical_distribution(const Image& img, Coord origin, int side, double t);

/// Plain mean over every pixel (the whole-screen average the scan estimator
/// is compared against; inconsistent once objects cover a fixed fraction).
double naive_mean(const Image& img);

}  // namespace percoscan
