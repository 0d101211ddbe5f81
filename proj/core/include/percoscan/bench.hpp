#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "percoscan/synth.hpp"

namespace percoscan {

enum class Experiment {
  Consistency,
  NaiveVsScan,
  ErrorRates,
  Complexity,
  PercolationPhase,
};

std::string experiment_name(Experiment e);
std::optional<Experiment> experiment_from_name(const std::string& name);

/// Window side as a function of the image side. The default tracks
/// ceil(2*ln(n)); fixed sides and fractions of n are available because some
/// experiments need wider windows than the logarithmic default.
struct WindowRule {
  enum class Kind { CeilTwoLog, Fixed, DivideBy };
  Kind kind = Kind::CeilTwoLog;
  int param = 0;

  int apply(int n) const;
  std::string str() const;
  /// Accepts "2log", "fixed:<k>", "div:<k>".
  static WindowRule parse(const std::string& text);
};

struct ExperimentConfig {
  Experiment experiment = Experiment::Consistency;
  std::vector<int> n_values;
  int seeds = 1;

  // scene template
  double background = 0.0;
  double contrast = 1.0;  // foreground - background
  NoiseModel noise = NoiseModel::uniform_bounded(1.0);
  int particle_count = 3;  // objects per error-rate/naive scene (0 = empty)

  WindowRule bg_window_rule{};   // background-estimate window
  WindowRule obj_window_rule{};  // object-estimate window

  // 0 = default 4*ceil(2*ln(n)); the acceptance suite passes pilot-frozen
  // values here
  std::size_t significance_size = 0;
  std::size_t noise_significance_size = 0;  // empty-scene (false alarm) runs
  std::optional<double> threshold_override;

  double rate_constant = 0.1;                    // c1 in the rate-bound rows
  std::vector<double> occupation_probs = {0.4, 0.6};  // percolation p values

  /// Throws std::invalid_argument for an empty/descending n list or seeds < 1.
  void validate() const;
};

/// One CSV record. seed == -1 marks per-n aggregate rows (frequencies).
struct ExperimentRow {
  std::string experiment;
  int n = 0;
  int seed = 0;
  std::string metric;
  double value = 0.0;
};

// Per (n, seed): abs_err_a, abs_err_b, abs_err_sigma2, sup_dist_F.
// Requires the scene to keep a noise-only window of the background-rule side.
std::vector<ExperimentRow> run_consistency(const ExperimentConfig& cfg, int jobs = 1);

// Per (n, seed): naive_err, scan_err on a scene with object fraction 1/4.
std::vector<ExperimentRow> run_naive_vs_scan(const ExperimentConfig& cfg, int jobs = 1);

// Per (n, seed): all_detected / false_alarm indicators; per n: miss_freq,
// false_alarm_freq and the missed-rate bound at cfg.rate_constant.
std::vector<ExperimentRow> run_error_rates(const ExperimentConfig& cfg, int jobs = 1);

// Per n: instrumented update counts and wall times for the window-sum
// construction and the full pipeline at window sides 8 and 64, plus ratios.
// Always sequential (timing), jobs ignored.
std::vector<ExperimentRow> run_complexity(const ExperimentConfig& cfg, int jobs = 1);

// Per (p, n, seed): largest black-cluster size of an i.i.d. Bernoulli(p)
// picture on the triangular lattice.
std::vector<ExperimentRow> run_percolation_phase(const ExperimentConfig& cfg,
                                                 int jobs = 1);

/// Dispatch on cfg.experiment.
std::vector<ExperimentRow> run_experiment(const ExperimentConfig& cfg, int jobs = 1);

/// CSV with header "experiment,n,seed,metric,value", %.12g values, LF line
/// endings. Unless deterministic_header is set, a timestamped comment line is
/// written first.
void write_csv(const std::vector<ExperimentRow>& rows, std::ostream& out,
               bool deterministic_header);

// Canonical scenes used by the experiments (and by tests).
SceneSpec three_particle_scene(int n, double background, double contrast,
                               NoiseModel noise);
SceneSpec quarter_particle_scene(int n, double background, double contrast,
                                 NoiseModel noise);
SceneSpec empty_scene(int n, double background, NoiseModel noise);

/// Deterministic per-trial stream seed, disjoint across (experiment, n, seed).
std::uint64_t trial_seed(Experiment e, int n, int seed);

}  // namespace percoscan
