#include <benchmark/benchmark.h>

#include "satforge/generators.hpp"
#include "satforge/graph.hpp"

using namespace satforge;

namespace {

CnfFormula ca_formula(Difficulty difficulty) {
    GeneratorConfig config;
    config.family = Family::CA;
    config.difficulty = difficulty;
    return std::get<CnfFormula>(sample_instance(config, 0));
}

void BM_BuildLcgStar(benchmark::State& state) {
    const CnfFormula f = ca_formula(static_cast<Difficulty>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(build_graph(f, GraphKind::LCG_STAR));
    state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations() * f.num_literals()));
}
BENCHMARK(BM_BuildLcgStar)->DenseRange(0, 2);

void BM_Louvain(benchmark::State& state) {
    const CnfFormula f = ca_formula(static_cast<Difficulty>(state.range(0)));
    const WeightedGraph g = to_weighted(build_graph(f, GraphKind::VCG));
    for (auto _ : state) benchmark::DoNotOptimize(detect_communities(g));
}
BENCHMARK(BM_Louvain)->DenseRange(0, 2)->Unit(benchmark::kMillisecond);

void BM_GraphStats(benchmark::State& state) {
    const CnfFormula f = ca_formula(static_cast<Difficulty>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(compute_graph_stats(f));
}
BENCHMARK(BM_GraphStats)->DenseRange(0, 2)->Unit(benchmark::kMillisecond);

} // namespace
