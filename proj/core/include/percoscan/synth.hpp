#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "percoscan/image.hpp"
#include "percoscan/rng.hpp"

namespace percoscan {

/// Zero-mean pixel noise with finite variance. UniformBounded and
/// TwoPointSymmetric are bounded (|eps| <= bound almost surely); StudentT
/// requires nu > 2 so the variance exists.
class NoiseModel {
 public:
  enum class Kind { UniformBounded, Gaussian, TwoPointSymmetric, StudentT };

  static NoiseModel uniform_bounded(double half_width);
  static NoiseModel gaussian(double sigma);
  static NoiseModel two_point(double magnitude);
  static NoiseModel student_t(double nu, double scale);

  Kind kind() const { return kind_; }

  /// Half-width / magnitude for the bounded kinds, sigma for Gaussian,
  /// degrees of freedom for StudentT.
  double primary_param() const { return p0_; }
  /// StudentT scale; unused otherwise.
  double secondary_param() const { return p1_; }

  double variance() const;
  /// Almost-sure bound on |eps| for the bounded kinds, nullopt otherwise.
  std::optional<double> bound() const;
  /// Exact distribution function F(t) = P(eps <= t).
  double cdf(double t) const;

  /// One draw. Consumes a fixed number of raw stream values per call
  /// (1 for UniformBounded/TwoPointSymmetric, 2 for Gaussian/StudentT),
  /// so draw sequences are reproducible across platforms.
  double draw(RandomStream& stream) const;

 private:
  NoiseModel(Kind kind, double p0, double p1) : kind_(kind), p0_(p0), p1_(p1) {}

  Kind kind_ = Kind::UniformBounded;
  double p0_ = 0.0;
  double p1_ = 0.0;
};

/// Ground-truth scene: constant background intensity, brighter particles
/// given as explicit pixel masks, plus the noise model.
struct SceneSpec {
  int side = 0;
  double background = 0.0;
  double foreground = 1.0;
  std::vector<std::vector<Coord>> particles;
  NoiseModel noise = NoiseModel::uniform_bounded(1.0);

  /// Throws std::invalid_argument unless foreground > background and all
  /// masks are in-bounds and pairwise disjoint.
  void validate() const;
};

/// Mask helpers (masks are plain pixel sets; no shape constraint is imposed).
std::vector<Coord> square_mask(Coord top_left, int side);
std::vector<Coord> disc_mask(Coord center, int radius);

/// Noise-free image: foreground on particle pixels, background elsewhere.
Image render_clean(const SceneSpec& scene);

/// clean + i.i.d. noise. Per-pixel draws are taken from a single stream in
/// row-major order; identical (noise, seed) gives a bit-identical image.
Image add_noise(const Image& clean, const NoiseModel& noise, std::uint64_t seed);

/// Row-major-first origin of a phi0 x phi0 window that intersects no particle
/// mask, or nullopt if none exists. Throws if phi0 is out of [1, side].
std::optional<Coord> has_noise_only_square(const SceneSpec& scene, int phi0);

/// Scene (de)serialization; schema "percoscan-scene/1", masks stored as
/// [row, col, run_length] triples. See README for the field list.
std::string scene_to_json(const SceneSpec& scene);
SceneSpec scene_from_json(const std::string& text);
SceneSpec load_scene(const std::string& path);
void save_scene(const SceneSpec& scene, const std::string& path);

}  // namespace percoscan
