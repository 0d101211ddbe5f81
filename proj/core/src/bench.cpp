#include "percoscan/bench.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <functional>
#include <memory>
#include <thread>

#include "percoscan/bounds.hpp"
#include "percoscan/detect.hpp"
#include "percoscan/grid.hpp"
#include "percoscan/scan.hpp"

namespace percoscan {

namespace {

constexpr std::uint64_t kBenchTag = 0x62656e6368ULL;  // "bench"

std::uint64_t experiment_tag(Experiment e) {
  return static_cast<std::uint64_t>(e) + 1;
}

std::size_t default_significance(int n) {
  return 4 * static_cast<std::size_t>(std::ceil(2.0 * std::log(n)));
}

using TrialFn = std::function<std::vector<ExperimentRow>()>;

std::vector<ExperimentRow> execute_trials(const std::vector<TrialFn>& trials, int jobs) {
  std::vector<std::vector<ExperimentRow>> results(trials.size());
  if (jobs <= 1 || trials.size() <= 1) {
    for (std::size_t i = 0; i < trials.size(); ++i) results[i] = trials[i]();
  } else {
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
      for (std::size_t i = next.fetch_add(1); i < trials.size();
           i = next.fetch_add(1))
        results[i] = trials[i]();
    };
    const int count = std::min<int>(jobs, static_cast<int>(trials.size()));
    std::vector<std::thread> pool;
    pool.reserve(count);
    for (int t = 0; t < count; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  // canonical order: trial construction order
  std::vector<ExperimentRow> rows;
  for (auto& r : results)
    rows.insert(rows.end(), std::make_move_iterator(r.begin()),
                std::make_move_iterator(r.end()));
  return rows;
}

double wall_ms(const std::function<void()>& fn) {
  const auto t0 = std::chrono::steady_clock::now();
  fn();
  const auto t1 = std::chrono::steady_clock::now();
  return std::chrono::duration<double, std::milli>(t1 - t0).count();
}

std::string prob_metric(const char* prefix, double p) {
  char buf[48];
  std::snprintf(buf, sizeof(buf), "%s_p%g", prefix, p);
  return buf;
}

}  // namespace

std::string experiment_name(Experiment e) {
  switch (e) {
    case Experiment::Consistency: return "consistency";
    case Experiment::NaiveVsScan: return "naive-vs-scan";
    case Experiment::ErrorRates: return "error-rates";
    case Experiment::Complexity: return "complexity";
    case Experiment::PercolationPhase: return "percolation";
  }
  return "unknown";
}

std::optional<Experiment> experiment_from_name(const std::string& name) {
  for (Experiment e : {Experiment::Consistency, Experiment::NaiveVsScan,
                       Experiment::ErrorRates, Experiment::Complexity,
                       Experiment::PercolationPhase})
    if (experiment_name(e) == name) return e;
  return std::nullopt;
}

int WindowRule::apply(int n) const {
  switch (kind) {
    case Kind::CeilTwoLog:
      return static_cast<int>(std::ceil(2.0 * std::log(n)));
    case Kind::Fixed:
      return param;
    case Kind::DivideBy:
      return std::max(1, n / param);
  }
  return 1;
}

std::string WindowRule::str() const {
  switch (kind) {
    case Kind::CeilTwoLog: return "2log";
    case Kind::Fixed: return "fixed:" + std::to_string(param);
    case Kind::DivideBy: return "div:" + std::to_string(param);
  }
  return "?";
}

WindowRule WindowRule::parse(const std::string& text) {
  if (text == "2log") return {Kind::CeilTwoLog, 0};
  auto parse_param = [&](std::size_t at) {
    const int v = std::stoi(text.substr(at));
    if (v < 1) throw std::invalid_argument("window rule parameter must be >= 1");
    return v;
  };
  if (text.rfind("fixed:", 0) == 0) return {Kind::Fixed, parse_param(6)};
  if (text.rfind("div:", 0) == 0) return {Kind::DivideBy, parse_param(4)};
  throw std::invalid_argument("bad window rule '" + text +
                              "' (want 2log | fixed:<k> | div:<k>)");
}

void ExperimentConfig::validate() const {
  if (n_values.empty())
    throw std::invalid_argument("ExperimentConfig: n_values must be nonempty");
  for (std::size_t i = 0; i < n_values.size(); ++i) {
    if (n_values[i] < 1)
      throw std::invalid_argument("ExperimentConfig: n must be positive");
    if (i > 0 && n_values[i] <= n_values[i - 1])
      throw std::invalid_argument("ExperimentConfig: n_values must be ascending");
  }
  if (seeds < 1) throw std::invalid_argument("ExperimentConfig: seeds must be >= 1");
  for (double p : occupation_probs)
    if (p < 0.0 || p > 1.0)
      throw std::invalid_argument("ExperimentConfig: occupation prob outside [0,1]");
}

std::uint64_t trial_seed(Experiment e, int n, int seed) {
  return seed_mix({kBenchTag, experiment_tag(e), static_cast<std::uint64_t>(n),
                   static_cast<std::uint64_t>(seed)});
}

SceneSpec three_particle_scene(int n, double background, double contrast,
                               NoiseModel noise) {
  if (n < 48)
    throw std::invalid_argument("three_particle_scene: side must be >= 48");
  const int s = std::min(40, (n - 20) / 2);
  SceneSpec scene;
  scene.side = n;
  scene.background = background;
  scene.foreground = background + contrast;
  scene.noise = noise;
  scene.particles = {
      square_mask({5, 5}, s),
      square_mask({5, n - 5 - s}, s),
      square_mask({n - 5 - s, 5}, s),
  };
  scene.validate();
  return scene;
}

SceneSpec quarter_particle_scene(int n, double background, double contrast,
                                 NoiseModel noise) {
  if (n < 2 || n % 2 != 0)
    throw std::invalid_argument("quarter_particle_scene: side must be even");
  SceneSpec scene;
  scene.side = n;
  scene.background = background;
  scene.foreground = background + contrast;
  scene.noise = noise;
  scene.particles = {square_mask({0, 0}, n / 2)};
  return scene;
}

SceneSpec empty_scene(int n, double background, NoiseModel noise) {
  SceneSpec scene;
  scene.side = n;
  scene.background = background;
  scene.foreground = background + 1.0;  // unused; keeps the invariant b > a
  scene.noise = noise;
  return scene;
}

std::vector<ExperimentRow> run_consistency(const ExperimentConfig& cfg, int jobs) {
  cfg.validate();
  const std::string name = experiment_name(Experiment::Consistency);
  const double sigma2_true = cfg.noise.variance();
  const double sigma_true = std::sqrt(sigma2_true);

  std::vector<TrialFn> trials;
  for (int n : cfg.n_values) {
    const int phi0 = cfg.bg_window_rule.apply(n);
    const int phi1 = cfg.obj_window_rule.apply(n);
    const SceneSpec scene =
        three_particle_scene(n, cfg.background, cfg.contrast, cfg.noise);
    if (!has_noise_only_square(scene, phi0))
      throw std::invalid_argument(
          "run_consistency: no noise-only window of the required side");
    const int particle_side = static_cast<int>(std::sqrt(
        static_cast<double>(scene.particles.front().size())));
    if (phi1 > particle_side)
      throw std::invalid_argument(
          "run_consistency: object window exceeds the particle side");

    const auto clean = std::make_shared<const Image>(render_clean(scene));
    for (int seed = 1; seed <= cfg.seeds; ++seed) {
      trials.push_back([=, &cfg]() {
        const Image img = add_noise(*clean, cfg.noise,
                                    trial_seed(Experiment::Consistency, n, seed));
        const ScanEstimate a = estimate_background(img, phi0);
        const ScanEstimate b = estimate_object(img, phi1);
        const double s2 = estimate_noise_variance(img, a.origin, phi0);

        // sup-distance of the empirical window distribution to the noise
        // distribution shifted by the true background, on a fixed grid
        double sup = 0.0;
        if (sigma_true > 0.0) {
          for (int k = 0; k <= 200; ++k) {
            const double t =
                cfg.background + (-4.0 + 8.0 * k / 200.0) * sigma_true;
            const double fhat = empirical_distribution(img, a.origin, phi0, t);
            sup = std::max(sup,
                           std::abs(fhat - cfg.noise.cdf(t - cfg.background)));
          }
        }

        return std::vector<ExperimentRow>{
            {name, n, seed, "abs_err_a", std::abs(a.value - cfg.background)},
            {name, n, seed, "abs_err_b",
             std::abs(b.value - (cfg.background + cfg.contrast))},
            {name, n, seed, "abs_err_sigma2", std::abs(s2 - sigma2_true)},
            {name, n, seed, "sup_dist_F", sup},
        };
      });
    }
  }
  return execute_trials(trials, jobs);
}

std::vector<ExperimentRow> run_naive_vs_scan(const ExperimentConfig& cfg, int jobs) {
  cfg.validate();
  const std::string name = experiment_name(Experiment::NaiveVsScan);

  std::vector<TrialFn> trials;
  for (int n : cfg.n_values) {
    const int phi0 = cfg.bg_window_rule.apply(n);
    const SceneSpec scene =
        cfg.particle_count == 0
            ? empty_scene(n, cfg.background, cfg.noise)
            : quarter_particle_scene(n, cfg.background, cfg.contrast, cfg.noise);
    if (!has_noise_only_square(scene, phi0))
      throw std::invalid_argument(
          "run_naive_vs_scan: no noise-only window of the required side");
    const auto clean = std::make_shared<const Image>(render_clean(scene));
    for (int seed = 1; seed <= cfg.seeds; ++seed) {
      trials.push_back([=, &cfg]() {
        const Image img = add_noise(*clean, cfg.noise,
                                    trial_seed(Experiment::NaiveVsScan, n, seed));
        const double naive = naive_mean(img);
        const ScanEstimate a = estimate_background(img, phi0);
        return std::vector<ExperimentRow>{
            {name, n, seed, "naive_err", std::abs(naive - cfg.background)},
            {name, n, seed, "scan_err", std::abs(a.value - cfg.background)},
        };
      });
    }
  }
  return execute_trials(trials, jobs);
}

std::vector<ExperimentRow> run_error_rates(const ExperimentConfig& cfg, int jobs) {
  cfg.validate();
  const std::string name = experiment_name(Experiment::ErrorRates);

  std::vector<ExperimentRow> rows;
  for (int n : cfg.n_values) {
    const int phi0 = cfg.bg_window_rule.apply(n);
    const int phi1 = cfg.obj_window_rule.apply(n);
    const std::size_t sig =
        cfg.significance_size ? cfg.significance_size : default_significance(n);
    const std::size_t noise_sig = cfg.noise_significance_size
                                      ? cfg.noise_significance_size
                                      : default_significance(n);

    // objects present: count seeds where every particle is detected
    const auto scene = std::make_shared<const SceneSpec>(
        three_particle_scene(n, cfg.background, cfg.contrast, cfg.noise));
    const auto clean = std::make_shared<const Image>(render_clean(*scene));
    DetectionConfig dcfg;
    dcfg.bg_window = phi0;
    dcfg.obj_window = phi1;
    dcfg.significance_size = sig;
    dcfg.threshold_override = cfg.threshold_override;

    std::vector<TrialFn> trials;
    for (int seed = 1; seed <= cfg.seeds; ++seed) {
      trials.push_back([=, &cfg]() {
        const Image img = add_noise(*clean, cfg.noise,
                                    trial_seed(Experiment::ErrorRates, n, seed));
        const DetectionReport report = detect_particles(img, dcfg);
        const std::vector<bool> hits = particles_detected(report, *scene);
        const bool all = std::all_of(hits.begin(), hits.end(),
                                     [](bool h) { return h; });
        return std::vector<ExperimentRow>{
            {name, n, seed, "all_detected", all ? 1.0 : 0.0}};
      });
    }

    // empty scenes: count seeds with a falsely significant cluster
    const auto empty_clean = std::make_shared<const Image>(
        render_clean(empty_scene(n, cfg.background, cfg.noise)));
    DetectionConfig ncfg = dcfg;
    ncfg.significance_size = noise_sig;
    for (int seed = 1; seed <= cfg.seeds; ++seed) {
      trials.push_back([=, &cfg]() {
        const Image img =
            add_noise(*empty_clean, cfg.noise,
                      trial_seed(Experiment::ErrorRates, n, -seed));
        const DetectionReport report = detect_particles(img, ncfg);
        return std::vector<ExperimentRow>{
            {name, n, seed, "false_alarm", report.particles_found() ? 1.0 : 0.0}};
      });
    }

    std::vector<ExperimentRow> trial_rows = execute_trials(trials, jobs);
    double missed = 0, alarms = 0;
    for (const auto& row : trial_rows) {
      if (row.metric == "all_detected" && row.value == 0.0) missed += 1;
      if (row.metric == "false_alarm" && row.value == 1.0) alarms += 1;
    }
    rows.insert(rows.end(), std::make_move_iterator(trial_rows.begin()),
                std::make_move_iterator(trial_rows.end()));
    rows.push_back({name, n, -1, "miss_freq", missed / cfg.seeds});
    rows.push_back({name, n, -1, "false_alarm_freq", alarms / cfg.seeds});
    rows.push_back(
        {name, n, -1, "missed_rate_bound",
         missed_detection_rate(static_cast<double>(scene->particles.size()),
                               phi1, cfg.rate_constant)});
  }
  return rows;
}

std::vector<ExperimentRow> run_complexity(const ExperimentConfig& cfg, int) {
  cfg.validate();
  const std::string name = experiment_name(Experiment::Complexity);
  const int reps = std::max(1, cfg.seeds);

  std::vector<ExperimentRow> rows;
  for (int n : cfg.n_values) {
    // deterministic noise image; content does not affect the op counts
    const Image img = add_noise(Image(n), NoiseModel::uniform_bounded(1.0),
                                trial_seed(Experiment::Complexity, n, 0));

    std::vector<double> scan_ops, detect_ops;
    for (int w : {8, 64}) {
      if (w > n) continue;
      OpCount ops;
      double best_ms = 0.0;
      for (int rep = 0; rep < reps; ++rep) {
        OpCount local;
        const double ms = wall_ms([&] {
          WindowSums sums = sliding_window_sums(img, w, &local);
          (void)sums;
        });
        best_ms = rep == 0 ? ms : std::min(best_ms, ms);
        ops = local;
      }
      const std::string suffix = "_w" + std::to_string(w);
      rows.push_back({name, n, 0, "scan_ops" + suffix,
                      static_cast<double>(ops.updates)});
      rows.push_back({name, n, 0, "scan_wall_ms" + suffix, best_ms});
      scan_ops.push_back(static_cast<double>(ops.updates));

      DetectionConfig dcfg;
      dcfg.bg_window = w;
      dcfg.obj_window = w;
      dcfg.significance_size = default_significance(n);
      OpCount dops;
      try {
        const double dms = wall_ms([&] {
          const DetectionReport report = detect_particles(img, dcfg, &dops);
          (void)report;
        });
        rows.push_back({name, n, 0, "detect_ops" + suffix,
                        static_cast<double>(dops.updates)});
        rows.push_back({name, n, 0, "detect_wall_ms" + suffix, dms});
        detect_ops.push_back(static_cast<double>(dops.updates));
      } catch (const degenerate_contrast_error&) {
        // w == n leaves a single window, so both estimates coincide; only
        // the window-sum rows are meaningful at that edge
      }
    }
    if (scan_ops.size() == 2) {
      rows.push_back({name, n, 0, "scan_ops_ratio_w64_w8", scan_ops[1] / scan_ops[0]});
      rows.push_back(
          {name, n, 0, "detect_ops_ratio_w64_w8", detect_ops[1] / detect_ops[0]});
    }
  }
  return rows;
}

std::vector<ExperimentRow> run_percolation_phase(const ExperimentConfig& cfg,
                                                 int jobs) {
  cfg.validate();
  const std::string name = experiment_name(Experiment::PercolationPhase);

  std::vector<TrialFn> trials;
  for (double p : cfg.occupation_probs) {
    for (int n : cfg.n_values) {
      for (int seed = 1; seed <= cfg.seeds; ++seed) {
        trials.push_back([=]() {
          RandomStream stream(seed_mix(
              {kBenchTag, experiment_tag(Experiment::PercolationPhase),
               static_cast<std::uint64_t>(n), static_cast<std::uint64_t>(seed),
               std::bit_cast<std::uint64_t>(p)}));
          BinaryImage img(n, LatticeKind::Triangular6);
          for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) img.set(i, j, stream.bernoulli(p));
          const double largest = static_cast<double>(largest_cluster_size(img));
          return std::vector<ExperimentRow>{
              {name, n, seed, prob_metric("largest_cluster", p), largest}};
        });
      }
    }
  }
  return execute_trials(trials, jobs);
}

std::vector<ExperimentRow> run_experiment(const ExperimentConfig& cfg, int jobs) {
  switch (cfg.experiment) {
    case Experiment::Consistency: return run_consistency(cfg, jobs);
    case Experiment::NaiveVsScan: return run_naive_vs_scan(cfg, jobs);
    case Experiment::ErrorRates: return run_error_rates(cfg, jobs);
    case Experiment::Complexity: return run_complexity(cfg, jobs);
    case Experiment::PercolationPhase: return run_percolation_phase(cfg, jobs);
  }
  throw std::invalid_argument("run_experiment: unknown experiment");
}

void write_csv(const std::vector<ExperimentRow>& rows, std::ostream& out,
               bool deterministic_header) {
  if (!deterministic_header) {
    const std::time_t now = std::time(nullptr);
    char stamp[32];
    std::strftime(stamp, sizeof(stamp), "%FT%TZ", std::gmtime(&now));
    out << "# generated " << stamp << "\n";
  }
  out << "experiment,n,seed,metric,value\n";
  char buf[64];
  for (const auto& row : rows) {
    std::snprintf(buf, sizeof(buf), "%.12g", row.value);
    out << row.experiment << ',' << row.n << ',' << row.seed << ',' << row.metric
        << ',' << buf << '\n';
  }
}

}  // namespace percoscan
