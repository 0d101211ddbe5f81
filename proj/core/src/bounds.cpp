#include "percoscan/bounds.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace percoscan {

double selection_error_bound(const SelectionBoundParams& p) {
  if (!(p.contrast > 0.0))
    throw std::invalid_argument("selection_error_bound: contrast must be > 0");
  if (p.sigma2 < 0.0 || p.noise_bound < 0.0)
    throw std::invalid_argument("selection_error_bound: negative variance or bound");

  const double c1 = 3.0 * p.contrast * p.contrast;
  const double c2 = 12.0 * p.sigma2;
  const double c3 = 4.0 * p.noise_bound * p.contrast;

  double total = 0.0;
  for (const auto& win : p.windows) {
    if (win.s1 < 0.0 || win.excess < 0.0)
      throw std::invalid_argument("selection_error_bound: negative window term");
    const double denom = c2 * win.excess + c3 * win.s1;
    // s1 = 0 makes the exponent vanish (including the 0/0 case): term = 1
    const double expo = (win.s1 == 0.0) ? 0.0 : -c1 * win.s1 * win.s1 / denom;
    total += std::exp(expo);
  }
  return total;
}

double missed_detection_rate(double pi, double phi1, double c1) {
  if (pi < 0.0 || phi1 < 0.0 || !(c1 > 0.0))
    throw std::invalid_argument("missed_detection_rate: bad arguments");
  return std::exp(pi * std::numbers::ln2 - c1 * phi1);
}

double joint_detection_lower_bound(double pi, double phi1, double c1) {
  if (pi < 1.0) throw std::invalid_argument("joint_detection_lower_bound: pi must be >= 1");
  const double x = c1 * phi1;
  if (!(x > 0.0))
    throw std::invalid_argument("joint_detection_lower_bound: c1*phi1 must be > 0");
  const double geometric = (1.0 - std::exp(-x * pi)) / (1.0 - std::exp(-x));
  return 1.0 - std::exp(pi * std::numbers::ln2 - x) * geometric;
}

SingleParticleBounds single_particle_bound(double phi1, double c1) {
  const double e = std::exp(-c1 * phi1);
  return {1.0 - e, 1.0 - (phi1 + 1.0) * e};
}

}  // namespace percoscan
