#include <benchmark/benchmark.h>

#include <random>

#include "rfdeauth/kde.hpp"
#include "rfdeauth/md.hpp"
#include "rfdeauth/re.hpp"
#include "rfdeauth/scenario.hpp"

using namespace rfdeauth;

namespace {

// 30 minutes of the reference office with a handful of departures.
const SimulationResult& short_reference() {
  static const SimulationResult sim = [] {
    const auto plan = reference_plan();
    ScenarioOptions o;
    o.departures = 6;
    o.min_gap = 120;
    o.max_gap = 240;
    const auto cfg = reference_config();
    return generate_trace(plan, reference_script(plan, o, cfg.sample_rate_hz), kReferenceNoiseSigma, 11,
                          cfg.sample_rate_hz);
  }();
  return sim;
}

}  // namespace

static void BM_SumStdTrackerPush(benchmark::State& state) {
  const auto streams = static_cast<std::size_t>(state.range(0));
  SumStdTracker tracker(streams, 6);
  std::mt19937_64 rng(1);
  std::normal_distribution<double> n(-60.0, 1.0);
  std::vector<double> row(streams);
  while (!tracker.ready()) {
    for (auto& v : row) v = n(rng);
    tracker.push(row);
  }
  for (auto _ : state) {
    for (auto& v : row) v = n(rng);
    tracker.push(row);
    benchmark::DoNotOptimize(tracker.value());
  }
}
BENCHMARK(BM_SumStdTrackerPush)->Arg(12)->Arg(72);

static void BM_KdePercentile(benchmark::State& state) {
  std::mt19937_64 rng(2);
  std::gamma_distribution<double> g(2.0, 1.0);
  std::vector<double> v(static_cast<std::size_t>(state.range(0)));
  for (auto& x : v) x = g(rng);
  for (auto _ : state) {
    const auto k = kde_estimate(v, BandwidthRule::silverman());
    benchmark::DoNotOptimize(percentile_threshold(k, 5.0));
  }
}
BENCHMARK(BM_KdePercentile)->Arg(100)->Arg(1000);

static void BM_ExtractFeatures(benchmark::State& state) {
  const auto& sim = short_reference();
  const auto cfg = reference_config();
  const auto streams = all_streams(sim.trace);
  for (auto _ : state) benchmark::DoNotOptimize(extract_features(sim.trace, streams, 1000, cfg));
}
BENCHMARK(BM_ExtractFeatures);

static void BM_Detect(benchmark::State& state) {
  const auto& sim = short_reference();
  const auto cfg = reference_config();
  for (auto _ : state) benchmark::DoNotOptimize(detect(sim.trace, cfg));
  state.SetItemsProcessed(state.iterations() * sim.trace.length());
}
BENCHMARK(BM_Detect)->Unit(benchmark::kMillisecond);

static void BM_GenerateTrace(benchmark::State& state) {
  const auto plan = reference_plan();
  ScenarioOptions o;
  o.departures = 2;
  o.min_gap = 60;
  o.max_gap = 90;
  const auto script = reference_script(plan, o, 4.0);
  for (auto _ : state) benchmark::DoNotOptimize(generate_trace(plan, script, kReferenceNoiseSigma, 3, 4.0));
}
BENCHMARK(BM_GenerateTrace)->Unit(benchmark::kMillisecond);
BENCHMARK_MAIN();
