// Microbenchmarks for model construction and the reference simplex across
// the four storage formulations. Sizes are kept small enough for the dense
// solver; row/nonzero counters expose the growth rates that drive solver
// runtime at scale.

#include <benchmark/benchmark.h>

#include "ldslab/analysis.hpp"
#include "ldslab/cem.hpp"
#include "support/instances.hpp"

namespace {

using namespace ldslab;

struct BenchSetup {
  SystemConfig config;
  TimeSeriesTable ts;
  PeriodMapping mapping;
  BaseModel base;
};

BenchSetup make_setup(int num_periods, int steps_per_period, int reps) {
  testsupport::InstanceSpec spec;
  spec.zones = 1;
  spec.num_periods = num_periods;
  spec.steps_per_period = steps_per_period;
  spec.num_representatives = reps;
  testsupport::TestInstance inst = testsupport::make_instance(1234, spec);
  BenchSetup setup{std::move(inst.config), std::move(inst.ts), {}, {}};
  setup.mapping = aggregate(setup.config, setup.ts);
  setup.base = build_base_model(setup.config, setup.ts, setup.mapping);
  return setup;
}

Formulation formulation_of(int index) { return kAllFormulations[index]; }

void BM_ApplyFormulation(benchmark::State& state) {
  const BenchSetup setup = make_setup(static_cast<int>(state.range(1)), 24, 4);
  const Formulation f = formulation_of(static_cast<int>(state.range(0)));
  std::int64_t rows = 0;
  std::int64_t nonzeros = 0;
  for (auto _ : state) {
    LpModel model = setup.base.model;
    apply_formulation(model, setup.base.handles, setup.mapping, setup.config, f);
    const ModelStats stats = model_stats(model);
    rows = stats.num_rows;
    nonzeros = stats.num_nonzeros;
    benchmark::DoNotOptimize(model);
  }
  state.counters["rows"] = static_cast<double>(rows);
  state.counters["nnz"] = static_cast<double>(nonzeros);
  state.SetLabel(std::string(formulation_name(f)));
}
BENCHMARK(BM_ApplyFormulation)
    ->ArgsProduct({{0, 1, 2, 3}, {28, 56, 112}})
    ->Unit(benchmark::kMicrosecond);

void BM_SolveFormulation(benchmark::State& state) {
  const BenchSetup setup = make_setup(static_cast<int>(state.range(1)), 6, 2);
  const Formulation f = formulation_of(static_cast<int>(state.range(0)));
  LpModel model = setup.base.model;
  apply_formulation(model, setup.base.handles, setup.mapping, setup.config, f);
  double objective = 0.0;
  for (auto _ : state) {
    const Solution solution = solve_reference(model);
    objective = solution.objective;
    benchmark::DoNotOptimize(solution);
  }
  state.counters["rows"] = static_cast<double>(model.num_rows());
  state.counters["objective"] = objective;
  state.SetLabel(std::string(formulation_name(f)));
}
BENCHMARK(BM_SolveFormulation)
    ->ArgsProduct({{0, 1, 2, 3}, {8, 16}})
    ->Unit(benchmark::kMillisecond);

void BM_FullPipeline(benchmark::State& state) {
  testsupport::InstanceSpec spec;
  spec.zones = 1;
  spec.num_periods = static_cast<int>(state.range(0));
  spec.steps_per_period = 6;
  spec.num_representatives = 2;
  testsupport::TestInstance inst = testsupport::make_instance(99, spec);
  const SolverSettings solver;
  for (auto _ : state) {
    const PeriodMapping mapping = aggregate(inst.config, inst.ts);
    const ComparisonReport report =
        compare_formulations(inst.config, inst.ts, mapping, kAllFormulations, solver);
    benchmark::DoNotOptimize(report);
  }
}
BENCHMARK(BM_FullPipeline)->Arg(8)->Arg(16)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
