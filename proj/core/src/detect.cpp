#include "percoscan/detect.hpp"

#include <algorithm>
#include <json.hpp>

namespace percoscan {

BinaryImage threshold_image(const Image& img, double theta, LatticeKind lattice) {
  const int n = img.side();
  BinaryImage out(n, lattice);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) out.set(i, j, img.at(i, j) >= theta);
  return out;
}

DetectionReport detect_particles(const Image& img, const DetectionConfig& cfg,
                                 OpCount* ops) {
  const int n = img.side();
  if (cfg.bg_window < 1 || cfg.bg_window > n || cfg.obj_window < 1 || cfg.obj_window > n)
    throw std::invalid_argument("detect_particles: window sides must be in [1, side]");
  if (cfg.significance_size < 1)
    throw std::invalid_argument("detect_particles: significance_size must be >= 1");

  DetectionReport report;
  report.image_side = n;
  report.significance_size = cfg.significance_size;

  if (cfg.threshold_override) {
    report.theta = *cfg.threshold_override;
    report.theta_overridden = true;
  } else {
    const ScanEstimate a = estimate_background(img, cfg.bg_window, ops);
    const ScanEstimate b = estimate_object(img, cfg.obj_window, ops);
    if (a.value >= b.value)
      throw degenerate_contrast_error(
          "detect_particles: background estimate >= object estimate");
    report.background = a;
    report.object_intensity = b;
    report.theta = compute_threshold(a.value, b.value);
  }

  const BinaryImage binary = threshold_image(img, report.theta, cfg.lattice);
  if (ops) ops->updates += static_cast<std::uint64_t>(n) * n;  // one compare per pixel

  std::uint64_t cluster_work = 0;
  std::vector<Cluster> clusters =
      find_black_clusters(binary, ops ? &cluster_work : nullptr);
  if (ops) ops->updates += cluster_work;

  report.black_pixels = binary.black_count();
  report.clusters_total = clusters.size();
  for (auto& cluster : clusters) {
    if (cluster.size() >= cfg.significance_size)
      report.significant.push_back(std::move(cluster));
  }
  return report;
}

std::vector<bool> particles_detected(const DetectionReport& report,
                                     const SceneSpec& scene) {
  if (report.image_side != scene.side)
    throw std::invalid_argument("particles_detected: report/scene dimensions differ");

  const int n = scene.side;
  // mask-id per pixel; masks are disjoint by SceneSpec invariant
  std::vector<std::int32_t> owner(static_cast<std::size_t>(n) * n, -1);
  for (std::size_t m = 0; m < scene.particles.size(); ++m)
    for (Coord c : scene.particles[m])
      owner[static_cast<std::size_t>(c.row) * n + c.col] = static_cast<std::int32_t>(m);

  std::vector<bool> detected(scene.particles.size(), false);
  std::vector<std::size_t> overlap(scene.particles.size(), 0);
  for (const Cluster& cluster : report.significant) {
    std::vector<std::int32_t> touched;
    for (Coord c : cluster.pixels) {
      const std::int32_t m = owner[static_cast<std::size_t>(c.row) * n + c.col];
      if (m < 0) continue;
      if (overlap[m]++ == 0) touched.push_back(m);
    }
    for (std::int32_t m : touched) {
      const std::size_t needed =
          std::min(report.significance_size, scene.particles[m].size());
      if (overlap[m] >= needed) detected[m] = true;
      overlap[m] = 0;
    }
  }
  return detected;
}

namespace {

nlohmann::json estimate_to_json(const ScanEstimate& e) {
  return {{"value", e.value},
          {"origin", {e.origin.row, e.origin.col}},
          {"side", e.window_side}};
}

nlohmann::json cluster_to_json(const Cluster& cluster, bool include_pixels) {
  int r0 = cluster.pixels.front().row, r1 = r0;
  int c0 = cluster.pixels.front().col, c1 = c0;
  for (Coord p : cluster.pixels) {
    r0 = std::min(r0, p.row);
    r1 = std::max(r1, p.row);
    c0 = std::min(c0, p.col);
    c1 = std::max(c1, p.col);
  }
  nlohmann::json j{{"size", cluster.size()}, {"bbox", {r0, c0, r1, c1}}};
  if (include_pixels) {
    nlohmann::json px = nlohmann::json::array();
    for (Coord p : cluster.pixels) px.push_back({p.row, p.col});
    j["pixels"] = px;
  }
  return j;
}

}  // namespace

std::string report_to_json(const DetectionReport& report, bool include_pixels) {
  nlohmann::json j;
  j["schema"] = "percoscan-report/1";
  j["image_side"] = report.image_side;
  j["theta"] = report.theta;
  j["theta_source"] = report.theta_overridden ? "override" : "estimated";
  j["a_hat"] = report.background ? estimate_to_json(*report.background)
                                 : nlohmann::json(nullptr);
  j["b_hat"] = report.object_intensity ? estimate_to_json(*report.object_intensity)
                                       : nlohmann::json(nullptr);
  j["significance_size"] = report.significance_size;
  j["black_pixels"] = report.black_pixels;
  j["clusters_total"] = report.clusters_total;
  nlohmann::json sig = nlohmann::json::array();
  for (const Cluster& cluster : report.significant)
    sig.push_back(cluster_to_json(cluster, include_pixels));
  j["clusters_significant"] = sig;
  if (report.particles_found()) {
    j["decision"] = {{"kind", "particles_found"},
                     {"count", report.significant.size()}};
  } else {
    j["decision"] = {{"kind", "no_particles"}};
  }
  return j.dump(2) + "\n";
}

}  // namespace percoscan
