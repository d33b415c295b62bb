#include <benchmark/benchmark.h>

#include <filesystem>

#include "spillplan/backbone.hpp"
#include "spillplan/solver.hpp"

using namespace spillplan;

namespace {

Scenario demo() { return load_scenario(std::filesystem::path(SPILLPLAN_DATA_DIR) / "demo.json"); }

// Demo with a finer hypothesis grid and a two-day horizon.
Scenario heavy() {
  Scenario s = demo();
  s.horizon = 48;
  s.hypotheses.clear();
  const int n = 32;
  for (int h = 0; h < n; ++h) {
    s.hypotheses.push_back({1.0 / n, 0.4 + 0.4 * h / (n - 1)});
  }
  return s;
}

using Solver = SolveResult (*)(const Scenario&, const DecisionBackbone&, Parallelism);

void run(benchmark::State& state, Scenario (*make)(), Solver solve, Parallelism par) {
  const Scenario s = make();
  const DecisionBackbone b = build_backbone(s);
  for (auto _ : state) {
    auto r = solve(s, b, par);
    benchmark::DoNotOptimize(r.value);
  }
}

}  // namespace

BENCHMARK_CAPTURE(run, demo_brute_serial, demo, &brute_force, Parallelism::Serial);
BENCHMARK_CAPTURE(run, demo_brute_openmp, demo, &brute_force, Parallelism::OpenMP);
BENCHMARK_CAPTURE(run, demo_staged_serial, demo, &backward_induct, Parallelism::Serial);
BENCHMARK_CAPTURE(run, demo_staged_openmp, demo, &backward_induct, Parallelism::OpenMP);
BENCHMARK_CAPTURE(run, heavy_brute_serial, heavy, &brute_force, Parallelism::Serial)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(run, heavy_brute_openmp, heavy, &brute_force, Parallelism::OpenMP)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(run, heavy_staged_serial, heavy, &backward_induct, Parallelism::Serial)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(run, heavy_staged_openmp, heavy, &backward_induct, Parallelism::OpenMP)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
