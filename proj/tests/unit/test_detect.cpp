#include <doctest.h>

#include <cmath>
#include <random>

#include "percoscan/bench.hpp"
#include "percoscan/detect.hpp"

using namespace percoscan;

TEST_CASE("compute_threshold: published micrograph estimates give 0.386") {
  CHECK(std::abs(compute_threshold(0.319, 0.453) - 0.386) <= 1e-12);
  CHECK(compute_threshold(0.5, 0.5) == 0.5);
  CHECK(compute_threshold(0.0, 1.0) == 0.5);
}

TEST_CASE("threshold_image: ties go black") {
  const Image img = Image::from_values(2, {0.453, 0.319, 0.386, 0.3859});
  const BinaryImage bin = threshold_image(img, 0.386, LatticeKind::Triangular6);
  CHECK(bin.black(0, 0));
  CHECK_FALSE(bin.black(0, 1));
  CHECK(bin.black(1, 0));  // exactly at the threshold
  CHECK_FALSE(bin.black(1, 1));

  const BinaryImage none = threshold_image(img, 0.5, LatticeKind::Triangular6);
  CHECK(none.black_count() == 0);
}

TEST_CASE("detect_particles: noiseless single square is recovered exactly") {
  SceneSpec scene;
  scene.side = 64;
  scene.particles = {square_mask({24, 24}, 10)};
  const Image img = render_clean(scene);

  DetectionConfig cfg;
  cfg.bg_window = 9;
  cfg.obj_window = 9;
  cfg.significance_size = 10;
  const DetectionReport report = detect_particles(img, cfg);

  CHECK(report.theta == doctest::Approx(0.5).epsilon(1e-12));
  REQUIRE(report.significant.size() == 1);
  CHECK(report.significant[0].size() == 100);
  CHECK(report.significant[0].pixels == square_mask({24, 24}, 10));
  CHECK(report.particles_found());

  const auto hits = particles_detected(report, scene);
  REQUIRE(hits.size() == 1);
  CHECK(hits[0]);
}

TEST_CASE("detect_particles: override above every value reports nothing") {
  DetectionConfig cfg;
  cfg.bg_window = 4;
  cfg.obj_window = 4;
  cfg.threshold_override = 2.0;
  const DetectionReport report = detect_particles(Image(32, 0.5), cfg);
  CHECK_FALSE(report.particles_found());
  CHECK(report.theta_overridden);
  CHECK_FALSE(report.background.has_value());
  CHECK(report.significant.empty());
  CHECK(report.black_pixels == 0);

  SceneSpec scene;
  scene.side = 32;
  scene.particles = {square_mask({0, 0}, 4)};
  const auto hits = particles_detected(report, scene);
  REQUIRE(hits.size() == 1);
  CHECK_FALSE(hits[0]);
}

TEST_CASE("detect_particles: degenerate contrast and bad windows throw") {
  DetectionConfig cfg;
  cfg.bg_window = 4;
  cfg.obj_window = 4;
  CHECK_THROWS_AS(detect_particles(Image(16, 0.5), cfg), degenerate_contrast_error);

  cfg.bg_window = 17;
  CHECK_THROWS_AS(detect_particles(Image(16, 0.5), cfg), std::invalid_argument);
  cfg.bg_window = 4;
  cfg.significance_size = 0;
  CHECK_THROWS_AS(detect_particles(Image(16, 0.5), cfg), std::invalid_argument);
}

TEST_CASE("particles_detected: merged cluster counts for both objects") {
  SceneSpec scene;
  scene.side = 24;
  // corner-adjacent squares: distinct masks, one triangular cluster
  scene.particles = {square_mask({2, 2}, 6), square_mask({8, 8}, 6)};
  const Image img = render_clean(scene);

  DetectionConfig cfg;
  cfg.bg_window = 4;
  cfg.obj_window = 4;
  cfg.significance_size = 6;
  const DetectionReport report = detect_particles(img, cfg);
  REQUIRE(report.significant.size() == 1);
  CHECK(report.significant[0].size() == 72);

  const auto hits = particles_detected(report, scene);
  REQUIRE(hits.size() == 2);
  CHECK(hits[0]);
  CHECK(hits[1]);

  // mismatched scene side
  SceneSpec other = scene;
  other.side = 32;
  other.particles.clear();
  CHECK_THROWS_AS(particles_detected(report, other), std::invalid_argument);
}

TEST_CASE("threshold monotonicity: higher theta shrinks the black set") {
  const Image img = add_noise(Image(48), NoiseModel::gaussian(1.0), 31);
  const BinaryImage lo = threshold_image(img, 0.2, LatticeKind::Triangular6);
  const BinaryImage hi = threshold_image(img, 0.8, LatticeKind::Triangular6);
  for (int i = 0; i < 48; ++i)
    for (int j = 0; j < 48; ++j)
      if (hi.black(i, j)) CHECK(lo.black(i, j));
  CHECK(largest_cluster_size(hi) <= largest_cluster_size(lo));
}

TEST_CASE("pipeline determinism: identical inputs, identical serialized report") {
  const SceneSpec scene = three_particle_scene(128, 0.1, 0.8,
                                               NoiseModel::uniform_bounded(0.5));
  const Image img = add_noise(render_clean(scene), scene.noise, 77);
  DetectionConfig cfg;
  cfg.bg_window = 10;
  cfg.obj_window = 10;
  cfg.significance_size = 30;
  const std::string a = report_to_json(detect_particles(img, cfg), true);
  const std::string b = report_to_json(detect_particles(img, cfg), true);
  CHECK(a == b);
}

TEST_CASE("scale-shift equivariance of the thresholded pattern") {
  const SceneSpec scene = three_particle_scene(96, 0.0, 1.0,
                                               NoiseModel::uniform_bounded(0.8));
  const Image img = add_noise(render_clean(scene), scene.noise, 5);
  std::vector<double> scaled(img.values().begin(), img.values().end());
  for (double& v : scaled) v = 2.0 * v + 1.0;
  const Image img2 = Image::from_values(96, std::move(scaled));

  DetectionConfig cfg;
  cfg.bg_window = 9;
  cfg.obj_window = 9;
  cfg.significance_size = 20;
  const DetectionReport r1 = detect_particles(img, cfg);
  const DetectionReport r2 = detect_particles(img2, cfg);

  CHECK(r2.theta == doctest::Approx(2.0 * r1.theta + 1.0).epsilon(1e-9));
  CHECK(r1.black_pixels == r2.black_pixels);
  REQUIRE(r1.significant.size() == r2.significant.size());
  for (std::size_t k = 0; k < r1.significant.size(); ++k)
    CHECK(r1.significant[k].pixels == r2.significant[k].pixels);
}

TEST_CASE("report JSON carries the required fields") {
  SceneSpec scene;
  scene.side = 32;
  scene.particles = {square_mask({4, 4}, 8)};
  const Image img = render_clean(scene);
  DetectionConfig cfg;
  cfg.bg_window = 5;
  cfg.obj_window = 5;
  cfg.significance_size = 8;

  const std::string text = report_to_json(detect_particles(img, cfg), false);
  for (const char* field :
       {"\"schema\"", "\"theta\"", "\"theta_source\"", "\"a_hat\"", "\"b_hat\"",
        "\"clusters_significant\"", "\"decision\"", "\"bbox\"", "\"size\""})
    CHECK(text.find(field) != std::string::npos);
  CHECK(text.find("\"pixels\"") == std::string::npos);  // suppressed

  cfg.threshold_override = 0.5;
  const std::string over = report_to_json(detect_particles(img, cfg), true);
  CHECK(over.find("\"theta_source\": \"override\"") != std::string::npos);
  CHECK(over.find("\"a_hat\": null") != std::string::npos);
  CHECK(over.find("\"pixels\"") != std::string::npos);
}
