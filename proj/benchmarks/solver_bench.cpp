#include <benchmark/benchmark.h>

#include "satforge/generators.hpp"
#include "satforge/local_search.hpp"
#include "satforge/solver.hpp"
#include "satforge/unsat_core.hpp"

using namespace satforge;

namespace {

std::vector<CnfFormula> three_sat(int n, std::size_t count) {
    std::vector<CnfFormula> out;
    Rng rng(static_cast<std::uint64_t>(n));
    for (std::size_t i = 0; i < count; ++i) out.push_back(gen_3sat(n, rng));
    return out;
}

void BM_SolveThreeSat(benchmark::State& state) {
    const auto formulas = three_sat(static_cast<int>(state.range(0)), 32);
    SolverConfig config;
    config.log_learned = false;
    std::size_t i = 0;
    for (auto _ : state) benchmark::DoNotOptimize(solve(formulas[i++ % formulas.size()], config).status);
}
BENCHMARK(BM_SolveThreeSat)->Arg(25)->Arg(50)->Arg(100)->Arg(150)->Unit(benchmark::kMillisecond);

void BM_BruteForce(benchmark::State& state) {
    const auto formulas = three_sat(static_cast<int>(state.range(0)), 8);
    std::size_t i = 0;
    for (auto _ : state) benchmark::DoNotOptimize(brute_force(formulas[i++ % formulas.size()]).status);
}
BENCHMARK(BM_BruteForce)->Arg(12)->Arg(16)->Arg(20)->Unit(benchmark::kMillisecond);

void BM_UnsatCore(benchmark::State& state) {
    std::vector<CnfFormula> unsat;
    for (const auto& f : three_sat(static_cast<int>(state.range(0)), 64))
        if (!is_satisfiable(f)) unsat.push_back(f);
    std::size_t i = 0;
    for (auto _ : state) benchmark::DoNotOptimize(extract_unsat_core(unsat[i++ % unsat.size()]));
}
BENCHMARK(BM_UnsatCore)->Arg(25)->Arg(40)->Unit(benchmark::kMillisecond);

void BM_Gsat(benchmark::State& state) {
    const auto formulas = three_sat(static_cast<int>(state.range(0)), 32);
    LsConfig config;
    config.max_flips = 32;
    std::size_t i = 0;
    for (auto _ : state) {
        config.seed = i;
        benchmark::DoNotOptimize(gsat_run(formulas[i++ % formulas.size()], config).solved);
    }
}
BENCHMARK(BM_Gsat)->Arg(25)->Arg(100);

} // namespace
