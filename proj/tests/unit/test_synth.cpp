#include <doctest.h>

#include <cmath>

#include "percoscan/synth.hpp"

using namespace percoscan;

TEST_CASE("render_clean: empty scene is constant background") {
  SceneSpec scene;
  scene.side = 4;
  scene.background = 0.0;
  scene.foreground = 1.0;
  const Image img = render_clean(scene);
  for (double v : img.values()) CHECK(v == 0.0);
}

TEST_CASE("render_clean: single-pixel mask") {
  SceneSpec scene;
  scene.side = 4;
  scene.particles = {{{0, 0}}};
  const Image img = render_clean(scene);
  CHECK(img.at(0, 0) == 1.0);
  CHECK(img.at(0, 1) == 0.0);
  CHECK(img.at(3, 3) == 0.0);
}

TEST_CASE("render_clean: two 2x2 masks give 8 bright pixels") {
  SceneSpec scene;
  scene.side = 8;
  scene.background = 0.3;
  scene.foreground = 0.9;
  scene.particles = {square_mask({0, 0}, 2), square_mask({5, 5}, 2)};
  const Image img = render_clean(scene);
  int bright = 0, dark = 0;
  for (double v : img.values()) {
    if (v == 0.9) ++bright;
    if (v == 0.3) ++dark;
  }
  CHECK(bright == 8);
  CHECK(dark == 56);
}

TEST_CASE("render_clean: overlapping masks are rejected") {
  SceneSpec scene;
  scene.side = 8;
  scene.particles = {square_mask({0, 0}, 3), square_mask({2, 2}, 3)};
  CHECK_THROWS_AS(render_clean(scene), std::invalid_argument);
}

TEST_CASE("scene invariants: contrast and bounds") {
  SceneSpec scene;
  scene.side = 4;
  scene.background = 1.0;
  scene.foreground = 0.5;
  CHECK_THROWS_AS(scene.validate(), std::invalid_argument);
  scene.foreground = 2.0;
  scene.particles = {{{4, 0}}};
  CHECK_THROWS_AS(scene.validate(), std::invalid_argument);
}

TEST_CASE("add_noise: zero-width noise changes nothing") {
  Image img(3, 0.7);
  const Image out = add_noise(img, NoiseModel::uniform_bounded(0.0), 9);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) CHECK(out.at(i, j) == 0.7);
}

TEST_CASE("add_noise: identical seeds give bit-identical images") {
  const Image clean(2);
  const auto noise = NoiseModel::uniform_bounded(1.0);
  const Image a = add_noise(clean, noise, 123);
  const Image b = add_noise(clean, noise, 123);
  const Image c = add_noise(clean, noise, 124);
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) CHECK(a.at(i, j) == b.at(i, j));
  bool any_diff = false;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) any_diff |= a.at(i, j) != c.at(i, j);
  CHECK(any_diff);
}

TEST_CASE("add_noise: gaussian sample moments at n=256") {
  const Image out = add_noise(Image(256), NoiseModel::gaussian(0.5), 5);
  double sum = 0.0, sq = 0.0;
  for (double v : out.values()) {
    sum += v;
    sq += v * v;
  }
  const double count = 256.0 * 256.0;
  const double mean = sum / count;
  const double var = sq / count - mean * mean;
  CHECK(std::abs(mean) < 4.0 * 0.5 / 256.0);
  CHECK(var == doctest::Approx(0.25).epsilon(0.10));
}

TEST_CASE("noise kinds: variance formulas match large samples") {
  struct Case {
    NoiseModel model;
    double tol;  // absolute, ~5 standard errors of the sample variance
  };
  const Case cases[] = {
      {NoiseModel::uniform_bounded(1.0), 0.02},
      {NoiseModel::gaussian(0.7), 0.02},
      {NoiseModel::two_point(0.8), 0.02},
      {NoiseModel::student_t(5.0, 1.0), 0.09},
  };
  for (const auto& c : cases) {
    RandomStream stream(42);
    const int count = 100000;
    double sum = 0.0, sq = 0.0;
    for (int k = 0; k < count; ++k) {
      const double x = c.model.draw(stream);
      sum += x;
      sq += x * x;
    }
    const double mean = sum / count;
    const double var = sq / count - mean * mean;
    CHECK(std::abs(var - c.model.variance()) < c.tol);
  }
}

TEST_CASE("noise kinds: symmetric, so empirical skewness is near zero") {
  for (const auto& model :
       {NoiseModel::uniform_bounded(1.0), NoiseModel::gaussian(1.0),
        NoiseModel::two_point(1.0), NoiseModel::student_t(6.0, 1.0)}) {
    RandomStream stream(7);
    const int count = 100000;
    double s1 = 0, s2 = 0, s3 = 0;
    for (int k = 0; k < count; ++k) {
      const double x = model.draw(stream);
      s1 += x;
      s2 += x * x;
      s3 += x * x * x;
    }
    const double mean = s1 / count;
    const double var = s2 / count - mean * mean;
    const double m3 = s3 / count - 3 * mean * var - mean * mean * mean;
    const double skew = m3 / std::pow(var, 1.5);
    CHECK(std::abs(skew) < 0.15);
  }
}

TEST_CASE("noise bound: bounded kinds never exceed it") {
  for (const auto& model :
       {NoiseModel::uniform_bounded(0.4), NoiseModel::two_point(0.4)}) {
    RandomStream stream(3);
    REQUIRE(model.bound().has_value());
    for (int k = 0; k < 20000; ++k)
      CHECK(std::abs(model.draw(stream)) <= *model.bound());
  }
  CHECK_FALSE(NoiseModel::gaussian(1.0).bound().has_value());
}

TEST_CASE("noise cdf: spot values") {
  const auto unif = NoiseModel::uniform_bounded(1.0);
  CHECK(unif.cdf(-1.0) == 0.0);
  CHECK(unif.cdf(0.0) == 0.5);
  CHECK(unif.cdf(1.0) == 1.0);
  const auto tp = NoiseModel::two_point(0.5);
  CHECK(tp.cdf(-0.6) == 0.0);
  CHECK(tp.cdf(-0.5) == 0.5);
  CHECK(tp.cdf(0.49) == 0.5);
  CHECK(tp.cdf(0.5) == 1.0);
  const auto g = NoiseModel::gaussian(2.0);
  CHECK(g.cdf(0.0) == doctest::Approx(0.5));
  CHECK(g.cdf(2.0) == doctest::Approx(0.841344746).epsilon(1e-6));
  const auto t = NoiseModel::student_t(5.0, 1.0);
  CHECK(t.cdf(0.0) == doctest::Approx(0.5));
  CHECK(t.cdf(100.0) == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("pixel-mean preservation: 1e4 replicates of one pixel") {
  const auto model = NoiseModel::student_t(4.0, 0.5);
  const double sigma = std::sqrt(model.variance());
  Image clean(1, 0.37);
  double sum = 0.0;
  for (int seed = 0; seed < 10000; ++seed)
    sum += add_noise(clean, model, seed).at(0, 0);
  const double se = sigma / std::sqrt(10000.0);
  CHECK(std::abs(sum / 10000.0 - 0.37) < 5.0 * se);
}

TEST_CASE("has_noise_only_square") {
  SceneSpec scene;
  scene.side = 8;

  SUBCASE("no particles: first window wins") {
    const auto witness = has_noise_only_square(scene, 3);
    REQUIRE(witness.has_value());
    CHECK(*witness == Coord{0, 0});
  }

  SUBCASE("full cover leaves nothing") {
    scene.particles = {square_mask({0, 0}, 8)};
    CHECK_FALSE(has_noise_only_square(scene, 1).has_value());
  }

  SUBCASE("4x4 mask at the top-left: the witness sits beside it") {
    scene.particles = {square_mask({0, 0}, 4)};
    const auto witness = has_noise_only_square(scene, 4);
    REQUIRE(witness.has_value());
    CHECK(*witness == Coord{0, 4});
  }

  SUBCASE("window side out of range") {
    CHECK_THROWS_AS(has_noise_only_square(scene, 0), std::invalid_argument);
    CHECK_THROWS_AS(has_noise_only_square(scene, 9), std::invalid_argument);
  }
}

TEST_CASE("disc masks stay within the bounding circle") {
  const auto mask = disc_mask({10, 10}, 3);
  CHECK(mask.size() == 29);  // |{(i,j): i^2+j^2 <= 9}|
  for (Coord c : mask) {
    const int di = c.row - 10, dj = c.col - 10;
    CHECK(di * di + dj * dj <= 9);
  }
}

TEST_CASE("scene JSON round-trip") {
  SceneSpec scene;
  scene.side = 32;
  scene.background = 0.25;
  scene.foreground = 0.75;
  scene.noise = NoiseModel::student_t(4.5, 0.3);
  scene.particles = {square_mask({2, 3}, 5), disc_mask({20, 20}, 4)};

  const SceneSpec back = scene_from_json(scene_to_json(scene));
  CHECK(back.side == scene.side);
  CHECK(back.background == scene.background);
  CHECK(back.foreground == scene.foreground);
  CHECK(back.noise.kind() == scene.noise.kind());
  CHECK(back.noise.primary_param() == scene.noise.primary_param());
  CHECK(back.noise.secondary_param() == scene.noise.secondary_param());
  REQUIRE(back.particles.size() == 2);
  // run-length encoding reorders pixels row-major; compare as sets
  for (std::size_t k = 0; k < 2; ++k) {
    auto a = scene.particles[k];
    auto b = back.particles[k];
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    CHECK(a == b);
  }
}

TEST_CASE("scene JSON: wrong schema and malformed input are format errors") {
  CHECK_THROWS_AS(scene_from_json("{}"), std::invalid_argument);
  CHECK_THROWS_AS(scene_from_json("not json"), std::invalid_argument);
  CHECK_THROWS_AS(
      scene_from_json(R"({"schema":"percoscan-scene/0","side":4})"),
      std::invalid_argument);
}
