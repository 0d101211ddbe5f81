#include "percoscan/synth.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include <boost/math/distributions/students_t.hpp>
#include <json.hpp>

namespace percoscan {

namespace {
constexpr std::uint64_t kNoiseStreamTag = 0x70786e6f697365ULL;  // "pxnoise"
}

NoiseModel NoiseModel::uniform_bounded(double half_width) {
  if (half_width < 0.0 || !std::isfinite(half_width))
    throw std::invalid_argument("NoiseModel: half_width must be >= 0");
  return {Kind::UniformBounded, half_width, 0.0};
}

NoiseModel NoiseModel::gaussian(double sigma) {
  if (sigma < 0.0 || !std::isfinite(sigma))
    throw std::invalid_argument("NoiseModel: sigma must be >= 0");
  return {Kind::Gaussian, sigma, 0.0};
}

NoiseModel NoiseModel::two_point(double magnitude) {
  if (magnitude < 0.0 || !std::isfinite(magnitude))
    throw std::invalid_argument("NoiseModel: magnitude must be >= 0");
  return {Kind::TwoPointSymmetric, magnitude, 0.0};
}

NoiseModel NoiseModel::student_t(double nu, double scale) {
  if (!(nu > 2.0)) throw std::invalid_argument("NoiseModel: StudentT needs nu > 2");
  if (scale < 0.0 || !std::isfinite(scale))
    throw std::invalid_argument("NoiseModel: scale must be >= 0");
  return {Kind::StudentT, nu, scale};
}

double NoiseModel::variance() const {
  switch (kind_) {
    case Kind::UniformBounded:
      return p0_ * p0_ / 3.0;
    case Kind::Gaussian:
      return p0_ * p0_;
    case Kind::TwoPointSymmetric:
      return p0_ * p0_;
    case Kind::StudentT:
      return p1_ * p1_ * p0_ / (p0_ - 2.0);
  }
  return 0.0;
}

std::optional<double> NoiseModel::bound() const {
  if (kind_ == Kind::UniformBounded || kind_ == Kind::TwoPointSymmetric)
    return p0_;
  return std::nullopt;
}

double NoiseModel::cdf(double t) const {
  switch (kind_) {
    case Kind::UniformBounded: {
      if (p0_ == 0.0) return t < 0.0 ? 0.0 : 1.0;
      return std::clamp((t + p0_) / (2.0 * p0_), 0.0, 1.0);
    }
    case Kind::Gaussian: {
      if (p0_ == 0.0) return t < 0.0 ? 0.0 : 1.0;
      return 0.5 * std::erfc(-t / (p0_ * std::numbers::sqrt2));
    }
    case Kind::TwoPointSymmetric: {
      if (t < -p0_) return 0.0;
      if (t < p0_) return 0.5;
      return 1.0;
    }
    case Kind::StudentT: {
      if (p1_ == 0.0) return t < 0.0 ? 0.0 : 1.0;
      boost::math::students_t dist(p0_);
      return boost::math::cdf(dist, t / p1_);
    }
  }
  return 0.0;
}

double NoiseModel::draw(RandomStream& stream) const {
  switch (kind_) {
    case Kind::UniformBounded: {
      const double u = stream.uniform01();
      return p0_ * (2.0 * u - 1.0);
    }
    case Kind::Gaussian: {
      // Box-Muller, cosine branch only: fixed two draws per variate.
      const double u = stream.uniform01_open();
      const double v = stream.uniform01_open();
      return p0_ * std::sqrt(-2.0 * std::log(u)) *
             std::cos(2.0 * std::numbers::pi * v);
    }
    case Kind::TwoPointSymmetric: {
      return stream.uniform01() < 0.5 ? -p0_ : p0_;
    }
    case Kind::StudentT: {
      // Bailey's polar method, cosine form: two draws per variate.
      const double u = stream.uniform01_open();
      const double v = stream.uniform01_open();
      const double r = std::sqrt(p0_ * (std::pow(u, -2.0 / p0_) - 1.0));
      return p1_ * r * std::cos(2.0 * std::numbers::pi * v);
    }
  }
  return 0.0;
}

void SceneSpec::validate() const {
  if (side <= 0) throw std::invalid_argument("SceneSpec: side must be positive");
  if (!(foreground > background))
    throw std::invalid_argument("SceneSpec: foreground must exceed background");
  std::vector<std::uint8_t> occ(static_cast<std::size_t>(side) * side, 0);
  for (const auto& mask : particles) {
    for (Coord c : mask) {
      if (c.row < 0 || c.col < 0 || c.row >= side || c.col >= side)
        throw std::invalid_argument("SceneSpec: mask pixel out of bounds");
      auto& cell = occ[static_cast<std::size_t>(c.row) * side + c.col];
      if (cell) throw std::invalid_argument("SceneSpec: particle masks overlap");
      cell = 1;
    }
  }
}

std::vector<Coord> square_mask(Coord top_left, int side) {
  std::vector<Coord> out;
  out.reserve(static_cast<std::size_t>(side) * side);
  for (int i = 0; i < side; ++i)
    for (int j = 0; j < side; ++j)
      out.push_back({top_left.row + i, top_left.col + j});
  return out;
}

std::vector<Coord> disc_mask(Coord center, int radius) {
  std::vector<Coord> out;
  const long r2 = static_cast<long>(radius) * radius;
  for (int i = center.row - radius; i <= center.row + radius; ++i)
    for (int j = center.col - radius; j <= center.col + radius; ++j) {
      const long di = i - center.row, dj = j - center.col;
      if (di * di + dj * dj <= r2) out.push_back({i, j});
    }
  return out;
}

Image render_clean(const SceneSpec& scene) {
  scene.validate();
  Image img(scene.side, scene.background);
  for (const auto& mask : scene.particles)
    for (Coord c : mask) img.at(c.row, c.col) = scene.foreground;
  return img;
}

Image add_noise(const Image& clean, const NoiseModel& noise, std::uint64_t seed) {
  RandomStream stream(seed_mix({kNoiseStreamTag, seed}));
  Image out = clean;
  const int n = out.side();
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) out.at(i, j) += noise.draw(stream);
  return out;
}

std::optional<Coord> has_noise_only_square(const SceneSpec& scene, int phi0) {
  if (phi0 < 1 || phi0 > scene.side)
    throw std::invalid_argument("has_noise_only_square: phi0 out of range");
  const int n = scene.side;

  // prefix sums over the particle occupancy grid
  std::vector<std::uint32_t> pre(static_cast<std::size_t>(n + 1) * (n + 1), 0);
  auto preat = [&](int i, int j) -> std::uint32_t& {
    return pre[static_cast<std::size_t>(i) * (n + 1) + j];
  };
  for (const auto& mask : scene.particles)
    for (Coord c : mask) preat(c.row + 1, c.col + 1) = 1;
  for (int i = 1; i <= n; ++i)
    for (int j = 1; j <= n; ++j)
      preat(i, j) += preat(i - 1, j) + preat(i, j - 1) - preat(i - 1, j - 1);

  const int m = n - phi0 + 1;
  for (int r = 0; r < m; ++r)
    for (int c = 0; c < m; ++c) {
      const std::uint32_t occupied = preat(r + phi0, c + phi0) - preat(r, c + phi0) -
                                     preat(r + phi0, c) + preat(r, c);
      if (occupied == 0) return Coord{r, c};
    }
  return std::nullopt;
}

namespace {

nlohmann::json noise_to_json(const NoiseModel& m) {
  switch (m.kind()) {
    case NoiseModel::Kind::UniformBounded:
      return {{"kind", "uniform"}, {"half_width", m.primary_param()}};
    case NoiseModel::Kind::Gaussian:
      return {{"kind", "gaussian"}, {"sigma", m.primary_param()}};
    case NoiseModel::Kind::TwoPointSymmetric:
      return {{"kind", "two_point"}, {"magnitude", m.primary_param()}};
    case NoiseModel::Kind::StudentT:
      return {{"kind", "student_t"},
              {"nu", m.primary_param()},
              {"scale", m.secondary_param()}};
  }
  return {};
}

NoiseModel noise_from_json(const nlohmann::json& j) {
  const std::string kind = j.at("kind").get<std::string>();
  if (kind == "uniform") return NoiseModel::uniform_bounded(j.at("half_width").get<double>());
  if (kind == "gaussian") return NoiseModel::gaussian(j.at("sigma").get<double>());
  if (kind == "two_point") return NoiseModel::two_point(j.at("magnitude").get<double>());
  if (kind == "student_t")
    return NoiseModel::student_t(j.at("nu").get<double>(), j.at("scale").get<double>());
  throw std::invalid_argument("scene: unknown noise kind '" + kind + "'");
}

// masks serialize as horizontal runs [row, col, len]
nlohmann::json mask_to_runs(const std::vector<Coord>& mask) {
  std::vector<Coord> sorted = mask;
  std::sort(sorted.begin(), sorted.end());
  nlohmann::json runs = nlohmann::json::array();
  std::size_t i = 0;
  while (i < sorted.size()) {
    std::size_t k = i + 1;
    while (k < sorted.size() && sorted[k].row == sorted[i].row &&
           sorted[k].col == sorted[k - 1].col + 1)
      ++k;
    runs.push_back({sorted[i].row, sorted[i].col, static_cast<int>(k - i)});
    i = k;
  }
  return runs;
}

std::vector<Coord> mask_from_runs(const nlohmann::json& runs) {
  std::vector<Coord> mask;
  for (const auto& run : runs) {
    if (!run.is_array() || run.size() != 3)
      throw std::invalid_argument("scene: mask run must be [row, col, len]");
    const int row = run[0].get<int>(), col = run[1].get<int>(), len = run[2].get<int>();
    if (len <= 0) throw std::invalid_argument("scene: mask run length must be positive");
    for (int d = 0; d < len; ++d) mask.push_back({row, col + d});
  }
  return mask;
}

}  // namespace

std::string scene_to_json(const SceneSpec& scene) {
  nlohmann::json j;
  j["schema"] = "percoscan-scene/1";
  j["side"] = scene.side;
  j["background"] = scene.background;
  j["foreground"] = scene.foreground;
  j["noise"] = noise_to_json(scene.noise);
  nlohmann::json parts = nlohmann::json::array();
  for (const auto& mask : scene.particles) parts.push_back(mask_to_runs(mask));
  j["particles"] = parts;
  return j.dump(2) + "\n";
}

SceneSpec scene_from_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw std::invalid_argument(std::string("scene: invalid JSON: ") + e.what());
  }
  if (j.value("schema", "") != "percoscan-scene/1")
    throw std::invalid_argument("scene: unsupported schema (want percoscan-scene/1)");
  SceneSpec scene;
  scene.side = j.at("side").get<int>();
  scene.background = j.at("background").get<double>();
  scene.foreground = j.at("foreground").get<double>();
  scene.noise = noise_from_json(j.at("noise"));
  for (const auto& runs : j.at("particles")) scene.particles.push_back(mask_from_runs(runs));
  scene.validate();
  return scene;
}

SceneSpec load_scene(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open scene file: " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return scene_from_json(ss.str());
}

void save_scene(const SceneSpec& scene, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write scene file: " + path);
  out << scene_to_json(scene);
}

}  // namespace percoscan
