#include <benchmark/benchmark.h>

#include "percoscan/bench.hpp"
#include "percoscan/detect.hpp"
#include "percoscan/grid.hpp"
#include "percoscan/scan.hpp"
#include "percoscan/synth.hpp"

using namespace percoscan;

namespace {

Image noise_image(int n) {
  return add_noise(Image(n), NoiseModel::uniform_bounded(1.0), 1);
}

}  // namespace

// The point of interest: runtime across window sides at a fixed image side
// should be flat.
static void BM_WindowSums(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const int w = static_cast<int>(state.range(1));
  const Image img = noise_image(n);
  for (auto _ : state) {
    WindowSums sums = sliding_window_sums(img, w);
    benchmark::DoNotOptimize(sums.sums.data());
  }
  state.SetComplexityN(static_cast<std::int64_t>(n) * n);
}
BENCHMARK(BM_WindowSums)
    ->ArgsProduct({{256, 512, 1024, 2048}, {8, 64}})
    ->Complexity(benchmark::oN);

static void BM_BackgroundEstimate(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const Image img = noise_image(n);
  for (auto _ : state) {
    ScanEstimate e = estimate_background(img, 13);
    benchmark::DoNotOptimize(e.value);
  }
}
BENCHMARK(BM_BackgroundEstimate)->Arg(512)->Arg(1024)->Arg(2048);

static void BM_ClusterExtraction(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const double p = static_cast<double>(state.range(1)) / 100.0;
  RandomStream stream(7);
  BinaryImage img(n, LatticeKind::Triangular6);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) img.set(i, j, stream.bernoulli(p));
  for (auto _ : state) {
    auto clusters = find_black_clusters(img);
    benchmark::DoNotOptimize(clusters.data());
  }
}
BENCHMARK(BM_ClusterExtraction)->ArgsProduct({{512, 1024}, {40, 60}});

static void BM_DetectPipeline(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const SceneSpec scene =
      three_particle_scene(n, 0.0, 1.0, NoiseModel::gaussian(0.5));
  const Image img = add_noise(render_clean(scene), scene.noise, 3);
  DetectionConfig cfg;
  cfg.bg_window = 13;
  cfg.obj_window = 9;
  cfg.significance_size = 40;
  for (auto _ : state) {
    DetectionReport report = detect_particles(img, cfg);
    benchmark::DoNotOptimize(report.significant.data());
  }
}
BENCHMARK(BM_DetectPipeline)->Arg(512)->Arg(1024);

BENCHMARK_MAIN();
