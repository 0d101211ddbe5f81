#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "percoscan/grid.hpp"
#include "percoscan/image.hpp"
#include "percoscan/scan.hpp"
#include "percoscan/synth.hpp"

namespace percoscan {

/// The estimated background intensity was not below the estimated object
/// intensity: the contrast premise failed or the windows are misconfigured.
class degenerate_contrast_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct DetectionConfig {
  int bg_window = 0;                  // window side for the background estimate
  int obj_window = 0;                 // window side for the object estimate
  std::size_t significance_size = 1;  // minimum vertex count of a significant cluster
  LatticeKind lattice = LatticeKind::Triangular6;
  std::optional<double> threshold_override;
};

struct DetectionReport {
  int image_side = 0;
  // absent when the threshold was overridden (the estimators are not run)
  std::optional<ScanEstimate> background;
  std::optional<ScanEstimate> object_intensity;
  double theta = 0.0;
  bool theta_overridden = false;
  std::size_t significance_size = 1;
  std::size_t black_pixels = 0;
  std::size_t clusters_total = 0;
  std::vector<Cluster> significant;  // size-descending, row-major tie-break

  bool particles_found() const { return !significant.empty(); }
};

/// Midpoint threshold between the two intensity estimates.
inline double compute_threshold(double a_hat, double b_hat) {
  return (a_hat + b_hat) / 2.0;
}

/// Pixel black iff value >= theta (ties are black).
BinaryImage threshold_image(const Image& img, double theta, LatticeKind lattice);

/// Full detection pipeline: estimate intensities (unless overridden),
/// threshold at their midpoint, extract black clusters, keep the significant
/// ones. Deterministic for identical inputs; O(side^2) total work.
/// Throws degenerate_contrast_error when the background estimate is not
/// below the object estimate.
DetectionReport detect_particles(const Image& img, const DetectionConfig& cfg,
                                 OpCount* ops = nullptr);

/// Per-particle detection flags: a particle mask counts as detected when some
/// significant cluster overlaps it in at least min(significance_size, mask
/// size) pixels. Throws if the report and scene dimensions differ.
std::vector<bool> particles_detected(const DetectionReport& report,
                                     const SceneSpec& scene);

/// Report serialization, schema "percoscan-report/1". Cluster pixel lists are
/// included only when include_pixels is set (they are O(side^2)).
std::string report_to_json(const DetectionReport& report, bool include_pixels);

}  // namespace percoscan
