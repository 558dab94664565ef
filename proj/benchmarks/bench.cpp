#include <benchmark/benchmark.h>

#include <cmath>

#include "fdpc/distpc.hpp"
#include "fdpc/experiments.hpp"
#include "fdpc/onehop.hpp"
#include "fdpc/oracle.hpp"
#include "fdpc/presets.hpp"
#include "fdpc/projection.hpp"
#include "fdpc/random_scenario.hpp"

namespace {

using namespace fdpc;

Scenario level(int l) {
  return ScenarioSequence::doubling(16.0, l + 1, 2, 0.5, 1, scaling_loss_model()).scenario(l);
}

void BM_OracleFig3(benchmark::State& st) {
  const Preset pr = preset("fig3-pf");
  const Scenario s = pr.scenario();
  const Utilities u = pr.utilities();
  for (auto _ : st) benchmark::DoNotOptimize(solve_centralized(s, u).utility_star);
}
BENCHMARK(BM_OracleFig3)->Unit(benchmark::kMillisecond);

void BM_OracleScalingLevel(benchmark::State& st) {
  const Scenario s = level(static_cast<int>(st.range(0)));
  const Utilities u = Utilities::uniform(s.num_ul(), s.num_dl(), UtilityFn::log(), UtilityFn::log());
  for (auto _ : st) benchmark::DoNotOptimize(solve_centralized(s, u).utility_star);
  st.SetLabel(std::to_string(s.num_ul()) + "x" + std::to_string(s.num_dl()));
}
BENCHMARK(BM_OracleScalingLevel)->DenseRange(0, 4)->Unit(benchmark::kMillisecond);

// Ten rounds on a fixed budget so the cost per round is comparable across sizes.
void BM_DistpcRounds(benchmark::State& st) {
  const Scenario s = level(static_cast<int>(st.range(0)));
  const Utilities u = Utilities::uniform(s.num_ul(), s.num_dl(), UtilityFn::log(), UtilityFn::log());
  AlgoParams p;
  p.max_iters = 10;
  for (auto _ : st) benchmark::DoNotOptimize(run(s, u, p).t);
  st.SetItemsProcessed(st.iterations() * 10);
}
BENCHMARK(BM_DistpcRounds)->DenseRange(0, 4)->Unit(benchmark::kMicrosecond);

void BM_GuardedRounds(benchmark::State& st) {
  const Scenario s = level(static_cast<int>(st.range(0)));
  const Utilities u = Utilities::uniform(s.num_ul(), s.num_dl(), UtilityFn::log(), UtilityFn::log());
  AlgoParams p;
  p.max_iters = 10;
  for (auto _ : st) benchmark::DoNotOptimize(run_guarded(s, u, p).state.t);
  st.SetItemsProcessed(st.iterations() * 10);
}
BENCHMARK(BM_GuardedRounds)->DenseRange(0, 3)->Unit(benchmark::kMicrosecond);

void BM_ProjectLogBudget(benchmark::State& st) {
  const std::size_t n = static_cast<std::size_t>(st.range(0));
  std::vector<double> y(n), lo(n);
  for (std::size_t j = 0; j < n; ++j) {
    y[j] = 1.0 + std::sin(0.7 * static_cast<double>(j));
    lo[j] = -6.0;
  }
  const double budget = 0.5 * static_cast<double>(n);
  for (auto _ : st) benchmark::DoNotOptimize(project_log_budget(y, lo, budget).multiplier);
}
BENCHMARK(BM_ProjectLogBudget)->RangeMultiplier(4)->Range(4, 1024);

}  // namespace

BENCHMARK_MAIN();
