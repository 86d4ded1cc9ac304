#include "mocheck/oracle.hpp"
#include "mocheck/pareto.hpp"
#include "mocheck/problem.hpp"

#include <benchmark/benchmark.h>

using namespace mocheck;

namespace {

void BM_PureOutcomesSerial(benchmark::State& state) {
    HardInstance inst = gen_hard_instance(static_cast<std::size_t>(state.range(0)), 1, 3);
    for (auto _ : state) {
        benchmark::DoNotOptimize(enumerate_pure_outcomes(inst.mdp, inst.targets, {10'000'000, false}));
    }
}

void BM_PureOutcomesParallel(benchmark::State& state) {
    HardInstance inst = gen_hard_instance(static_cast<std::size_t>(state.range(0)), 1, 3);
    for (auto _ : state) {
        benchmark::DoNotOptimize(enumerate_pure_outcomes(inst.mdp, inst.targets, {10'000'000, true}));
    }
}

void BM_ExactVertices(benchmark::State& state) {
    HardInstance inst = gen_hard_instance(static_cast<std::size_t>(state.range(0)), 1);
    ReachProblem p = reach_problem(inst.mdp, {"R", "B"});
    for (auto _ : state) benchmark::DoNotOptimize(exact_vertices_biobjective(p.lp));
}

void BM_EpsilonPareto(benchmark::State& state) {
    HardInstance inst = gen_hard_instance(6, 1);
    ReachProblem p = reach_problem(inst.mdp, {"R", "B"});
    Rational eps(1, state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(epsilon_pareto(p.lp, eps));
}

}  // namespace

BENCHMARK(BM_PureOutcomesSerial)->Arg(3)->Arg(4)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_PureOutcomesParallel)->Arg(3)->Arg(4)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_ExactVertices)->Arg(4)->Arg(6)->Arg(8)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_EpsilonPareto)->Arg(10)->Arg(100)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
