#include <benchmark/benchmark.h>

#include "pshave/io.hpp"
#include "pshave/lifecost.hpp"
#include "pshave/lp.hpp"
#include "pshave/operation.hpp"
#include "pshave/study.hpp"

using namespace pshave;

namespace {

StudyConfig config_with_segments(int segments) {
    StudyConfig config = io::default_config();
    config.segments = segments;
    return config;
}

void BM_BuildDayLp(benchmark::State& state) {
    const DayProblem problem = scenario_problem(config_with_segments(static_cast<int>(state.range(0))),
                                                Scenario::kCapacityCriterion);
    for (auto _ : state) {
        DayLp day = build_day_lp(problem);
        benchmark::DoNotOptimize(day.program.num_variables());
    }
}
BENCHMARK(BM_BuildDayLp)->Arg(4)->Arg(8)->Arg(16)->Unit(benchmark::kMicrosecond);

// Simplex alone on the day-ahead program; the counter reports pivots per solve.
void BM_SolveDayLp(benchmark::State& state) {
    const DayProblem problem = scenario_problem(config_with_segments(static_cast<int>(state.range(0))),
                                                Scenario::kCapacityCriterion);
    const DayLp day = build_day_lp(problem);
    int iterations = 0;
    for (auto _ : state) {
        const lp::LPSolution s = lp::solve(day.program);
        iterations = s.iterations;
        benchmark::DoNotOptimize(s.objective);
    }
    state.counters["pivots"] = iterations;
    state.counters["rows"] = static_cast<double>(day.program.constraints().size());
}
BENCHMARK(BM_SolveDayLp)->Arg(4)->Arg(8)->Arg(16)->Unit(benchmark::kMillisecond);

void BM_OptimizeScenario(benchmark::State& state) {
    const StudyConfig config = io::default_config();
    const DayProblem problem = scenario_problem(config, static_cast<Scenario>(state.range(0)));
    for (auto _ : state) {
        benchmark::DoNotOptimize(optimize_day(problem).cost.total);
    }
}
BENCHMARK(BM_OptimizeScenario)->DenseRange(1, 4)->Unit(benchmark::kMillisecond);

void BM_BuildPwl(benchmark::State& state) {
    const StudyConfig config = io::default_config();
    const LifeModel life = capacity_life(config);
    PwlOptions options;
    options.segments = static_cast<int>(state.range(0));
    for (auto _ : state) {
        benchmark::DoNotOptimize(build_pwl(life, config.storage, options));
    }
}
BENCHMARK(BM_BuildPwl)->Arg(8)->Arg(64);

void BM_FourScenarios(benchmark::State& state) {
    const StudyConfig config = io::default_config();
    for (auto _ : state) {
        benchmark::DoNotOptimize(run_four_scenarios(config));
    }
}
BENCHMARK(BM_FourScenarios)->Unit(benchmark::kMillisecond);

void BM_SimulateWithoutFeedback(benchmark::State& state) {
    const StudyConfig config = io::default_config();
    const LifeModel life = capacity_life(config);
    SimulationOptions options;
    options.feedback = false;
    for (auto _ : state) {
        benchmark::DoNotOptimize(simulate_to_eol(config, life, options));
    }
}
BENCHMARK(BM_SimulateWithoutFeedback)->Unit(benchmark::kMillisecond);

}  // namespace
BENCHMARK_MAIN();
