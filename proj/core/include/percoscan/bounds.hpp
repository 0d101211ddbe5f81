#pragma once

#include <vector>

namespace percoscan {

/// One candidate window in the selection-error bound: s1 = number of object
/// pixels it contains, excess = number of its pixels outside the reference
/// noise-only window.
struct WindowContamination {
  double s1 = 0.0;
  double excess = 0.0;
};

/// Inputs of the selection-error bound. The derived constants are
/// 3*(b-a)^2, 12*sigma^2 and 4*M*(b-a).
struct SelectionBoundParams {
  double contrast = 0.0;     // b - a, must be > 0
  double sigma2 = 0.0;       // noise variance
  double noise_bound = 0.0;  // almost-sure bound M on |eps|
  std::vector<WindowContamination> windows;
};

/// Upper bound on the probability that any contaminated window beats the
/// noise-only one: sum over windows of
/// exp(-3(b-a)^2 s1^2 / (12 sigma^2 excess + 4M(b-a) s1)).
/// A window with s1 = 0 contributes 1 (the exponent is taken as 0, also for
/// the 0/0 case). The result may exceed 1; it is only an upper bound.
double selection_error_bound(const SelectionBoundParams& p);

/// exp(pi*ln2 - c1*phi1): rate bound on the probability of missing any of
/// pi objects when significant clusters need phi1 vertices.
double missed_detection_rate(double pi, double phi1, double c1);

/// Lower bound on the probability that all pi objects are detected:
/// 1 - exp(pi*ln2 - c1*phi1) * (1 - exp(-c1*phi1*pi)) / (1 - exp(-c1*phi1)).
/// Returned raw (not clamped to [0,1]). Requires pi >= 1 and c1*phi1 > 0.
double joint_detection_lower_bound(double pi, double phi1, double c1);

/// Two forms of the single-object detection bound evaluated with the same
/// caller-chosen rate constant.
struct SingleParticleBounds {
  double exponential;  // 1 - exp(-c1*phi1)
  double prefactor;    // 1 - (phi1 + 1) * exp(-c1*phi1)
};
SingleParticleBounds single_particle_bound(double phi1, double c1);

}  // namespace percoscan
