// percoscan: detect bright objects in noisy images by scan-estimator
// thresholding and percolation-cluster filtering, plus the Monte Carlo
// experiment runner. See README.md for the workflow.

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "percoscan/bench.hpp"
#include "percoscan/detect.hpp"
#include "percoscan/pgm.hpp"
#include "percoscan/scan.hpp"
#include "percoscan/synth.hpp"

namespace {

// one exit code per error class so shell pipelines can branch
constexpr int kExitUsage = 1;
constexpr int kExitIo = 2;
constexpr int kExitFormat = 3;
constexpr int kExitValidation = 4;
constexpr int kExitDegenerate = 5;

struct exit_error {
  int code;
  std::string message;
};

[[noreturn]] void fail(int code, const std::string& message) {
  throw exit_error{code, message};
}

struct DetectArgs {
  std::string input;
  std::string out_dir = ".";
  int phi0 = 0;  // 0 = ceil(2*ln(side)) after downsampling
  int phi1 = 0;
  std::size_t min_cluster = 0;  // 0 = phi1
  std::string lattice = "tri";
  int downsample = 0;
  double theta = std::numeric_limits<double>::quiet_NaN();
  std::uint64_t seed = 0;
  bool no_pixels = false;
};

percoscan::Image load_input(const DetectArgs& args) {
  namespace fs = std::filesystem;
  if (!fs::exists(args.input)) fail(kExitIo, "input file not found: " + args.input);

  if (args.input.size() >= 5 &&
      args.input.compare(args.input.size() - 5, 5, ".json") == 0) {
    percoscan::SceneSpec scene;
    try {
      scene = percoscan::load_scene(args.input);
    } catch (const std::invalid_argument& e) {
      fail(kExitFormat, e.what());
    } catch (const std::runtime_error& e) {
      fail(kExitIo, e.what());
    }
    return percoscan::add_noise(percoscan::render_clean(scene), scene.noise,
                                args.seed);
  }

  percoscan::PgmImage pgm;
  try {
    pgm = percoscan::read_pgm_file(args.input);
  } catch (const percoscan::pgm_error& e) {
    fail(kExitFormat, e.what());
  } catch (const std::runtime_error& e) {
    fail(kExitIo, e.what());
  }
  try {
    return percoscan::normalize(pgm);
  } catch (const std::invalid_argument& e) {
    fail(kExitValidation, e.what());
  }
}

void write_file(const std::filesystem::path& path,
                const std::vector<unsigned char>& bytes) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(kExitIo, "cannot write " + path.string());
  out.write(reinterpret_cast<const char*>(bytes.data()),
            static_cast<std::streamsize>(bytes.size()));
  if (!out) fail(kExitIo, "write failed: " + path.string());
}

int run_detect(const DetectArgs& args) {
  percoscan::Image img = load_input(args);
  for (int k = 0; k < args.downsample; ++k) {
    try {
      img = percoscan::downsample2x(img);
    } catch (const std::invalid_argument& e) {
      fail(kExitValidation, e.what());
    }
  }

  const int n = img.side();
  const int default_window = static_cast<int>(std::ceil(2.0 * std::log(n)));
  percoscan::DetectionConfig cfg;
  cfg.bg_window = args.phi0 > 0 ? args.phi0 : std::min(default_window, n);
  cfg.obj_window = args.phi1 > 0 ? args.phi1 : std::min(default_window, n);
  cfg.significance_size =
      args.min_cluster > 0 ? args.min_cluster
                           : static_cast<std::size_t>(cfg.obj_window);
  cfg.lattice = args.lattice == "square" ? percoscan::LatticeKind::Square4
                                         : percoscan::LatticeKind::Triangular6;
  if (!std::isnan(args.theta)) cfg.threshold_override = args.theta;

  percoscan::DetectionReport report;
  try {
    report = percoscan::detect_particles(img, cfg);
  } catch (const percoscan::degenerate_contrast_error& e) {
    fail(kExitDegenerate, e.what());
  } catch (const std::invalid_argument& e) {
    fail(kExitValidation, e.what());
  }

  namespace fs = std::filesystem;
  const fs::path out_dir(args.out_dir);
  std::error_code ec;
  fs::create_directories(out_dir, ec);
  if (ec) fail(kExitIo, "cannot create output directory: " + out_dir.string());

  {
    std::ofstream jout(out_dir / "report.json", std::ios::binary);
    if (!jout) fail(kExitIo, "cannot write report.json");
    jout << percoscan::report_to_json(report, !args.no_pixels);
  }

  const percoscan::BinaryImage thresholded =
      percoscan::threshold_image(img, report.theta, cfg.lattice);
  write_file(out_dir / "thresholded.pgm", percoscan::write_pgm(thresholded));

  percoscan::BinaryImage filtered(n, cfg.lattice);
  for (const percoscan::Cluster& cluster : report.significant)
    for (percoscan::Coord c : cluster.pixels) filtered.set(c.row, c.col, true);
  write_file(out_dir / "filtered.pgm", percoscan::write_pgm(filtered));

  std::cout << "side " << n << "\n";
  if (report.background)
    std::cout << "a_hat " << report.background->value << " at ("
              << report.background->origin.row << ","
              << report.background->origin.col << ")\n"
              << "b_hat " << report.object_intensity->value << " at ("
              << report.object_intensity->origin.row << ","
              << report.object_intensity->origin.col << ")\n";
  std::cout << "theta " << report.theta
            << (report.theta_overridden ? " (override)" : "") << "\n"
            << "clusters " << report.clusters_total << " significant "
            << report.significant.size() << "\n"
            << (report.particles_found() ? "particles found" : "no particles")
            << "\n";
  return 0;
}

struct BenchArgs {
  std::string experiment;
  std::string n_list = "128,256,512";
  int seeds = 1;
  std::string out;
  bool deterministic_header = false;
  int jobs = 1;
  std::string window_rule = "2log";
  std::string obj_window_rule;
  double contrast = 1.0;
  std::string noise = "uniform:1";
  std::size_t significance = 0;
  std::size_t noise_significance = 0;
  double c1 = 0.1;
  std::string p_list = "0.4,0.6";
  int particles = 3;
  double theta = std::numeric_limits<double>::quiet_NaN();
};

std::vector<int> parse_int_list(const std::string& text) {
  std::vector<int> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ','))
    if (!item.empty()) out.push_back(std::stoi(item));
  return out;
}

std::vector<double> parse_double_list(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ','))
    if (!item.empty()) out.push_back(std::stod(item));
  return out;
}

percoscan::NoiseModel parse_noise(const std::string& text) {
  const auto colon = text.find(':');
  const std::string kind = text.substr(0, colon);
  const std::string params = colon == std::string::npos ? "" : text.substr(colon + 1);
  if (kind == "uniform") return percoscan::NoiseModel::uniform_bounded(std::stod(params));
  if (kind == "gaussian") return percoscan::NoiseModel::gaussian(std::stod(params));
  if (kind == "two_point") return percoscan::NoiseModel::two_point(std::stod(params));
  if (kind == "student_t") {
    const auto comma = params.find(',');
    if (comma == std::string::npos)
      fail(kExitUsage, "student_t noise wants nu,scale");
    return percoscan::NoiseModel::student_t(std::stod(params.substr(0, comma)),
                                            std::stod(params.substr(comma + 1)));
  }
  fail(kExitUsage, "unknown noise kind '" + kind + "'");
}

int run_bench(const BenchArgs& args) {
  const auto experiment = percoscan::experiment_from_name(args.experiment);
  if (!experiment)
    fail(kExitUsage, "unknown experiment '" + args.experiment +
                         "' (want consistency | naive-vs-scan | error-rates | "
                         "complexity | percolation)");

  percoscan::ExperimentConfig cfg;
  cfg.experiment = *experiment;
  cfg.contrast = args.contrast;
  cfg.seeds = args.seeds;
  cfg.rate_constant = args.c1;
  cfg.particle_count = args.particles;
  cfg.significance_size = args.significance;
  cfg.noise_significance_size = args.noise_significance;
  if (!std::isnan(args.theta)) cfg.threshold_override = args.theta;
  try {
    cfg.n_values = parse_int_list(args.n_list);
    cfg.occupation_probs = parse_double_list(args.p_list);
    cfg.noise = parse_noise(args.noise);
    cfg.bg_window_rule = percoscan::WindowRule::parse(args.window_rule);
    cfg.obj_window_rule = percoscan::WindowRule::parse(
        args.obj_window_rule.empty() ? args.window_rule : args.obj_window_rule);
  } catch (const std::exception& e) {
    fail(kExitUsage, e.what());
  }

  std::vector<percoscan::ExperimentRow> rows;
  try {
    rows = percoscan::run_experiment(cfg, args.jobs);
  } catch (const std::invalid_argument& e) {
    fail(kExitValidation, e.what());
  }

  if (args.out.empty()) {
    percoscan::write_csv(rows, std::cout, args.deterministic_header);
  } else {
    std::ofstream out(args.out, std::ios::binary);
    if (!out) fail(kExitIo, "cannot write " + args.out);
    percoscan::write_csv(rows, out, args.deterministic_header);
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"object detection in noisy images via scan estimators and "
               "percolation clusters"};
  app.require_subcommand(1);

  DetectArgs detect_args;
  CLI::App* detect = app.add_subcommand("detect", "run the detection pipeline");
  detect->add_option("input", detect_args.input,
                     "input image (.pgm) or scene (.json)")->required();
  detect->add_option("--phi0", detect_args.phi0,
                     "background-estimate window side (default ceil(2 ln n))");
  detect->add_option("--phi1", detect_args.phi1,
                     "object-estimate window side (default ceil(2 ln n))");
  detect->add_option("--min-cluster", detect_args.min_cluster,
                     "significant cluster size (default phi1)");
  detect->add_option("--lattice", detect_args.lattice, "square | tri")
      ->check(CLI::IsMember({"square", "tri"}));
  detect->add_option("--downsample", detect_args.downsample,
                     "number of 2x block-mean reductions");
  detect->add_option("--theta", detect_args.theta,
                     "fixed threshold (skips the scan estimators)");
  detect->add_option("--out", detect_args.out_dir, "output directory");
  detect->add_option("--seed", detect_args.seed,
                     "noise seed (scene input only)");
  detect->add_flag("--no-pixels", detect_args.no_pixels,
                   "omit cluster pixel lists from report.json");

  BenchArgs bench_args;
  CLI::App* bench = app.add_subcommand("bench", "run a Monte Carlo experiment");
  bench->add_option("--experiment", bench_args.experiment,
                    "consistency | naive-vs-scan | error-rates | complexity | "
                    "percolation")->required();
  bench->add_option("--n", bench_args.n_list, "comma-separated image sides");
  bench->add_option("--seeds", bench_args.seeds, "seeds per configuration");
  bench->add_option("--out", bench_args.out, "CSV output file (default stdout)");
  bench->add_flag("--deterministic-header", bench_args.deterministic_header,
                  "omit the timestamp comment line");
  bench->add_option("--jobs", bench_args.jobs, "worker threads");
  bench->add_option("--window-rule", bench_args.window_rule,
                    "2log | fixed:<k> | div:<k>");
  bench->add_option("--obj-window-rule", bench_args.obj_window_rule,
                    "object-window rule (default: same as --window-rule)");
  bench->add_option("--contrast", bench_args.contrast, "foreground - background");
  bench->add_option("--noise", bench_args.noise,
                    "uniform:<M> | gaussian:<sigma> | two_point:<M> | "
                    "student_t:<nu>,<scale>");
  bench->add_option("--significance", bench_args.significance,
                    "significant cluster size for object scenes");
  bench->add_option("--noise-significance", bench_args.noise_significance,
                    "significant cluster size for empty scenes");
  bench->add_option("--c1", bench_args.c1, "rate constant for bound rows");
  bench->add_option("--p", bench_args.p_list, "percolation probabilities");
  bench->add_option("--particles", bench_args.particles,
                    "objects per scene (0 = empty)");
  bench->add_option("--theta", bench_args.theta, "threshold override");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (detect->parsed()) return run_detect(detect_args);
    return run_bench(bench_args);
  } catch (const exit_error& e) {
    std::cerr << "percoscan: " << e.message << "\n";
    return e.code;
  } catch (const std::exception& e) {
    std::cerr << "percoscan: " << e.what() << "\n";
    return kExitValidation;
  }
}
