#include <benchmark/benchmark.h>

#include "gargaml/community.hpp"
#include "gargaml/pipeline.hpp"
#include "gargaml/scoring.hpp"
#include "gargaml/synthgen.hpp"

using namespace gargaml;

namespace {

Graph make_graph(std::int64_t nodes) {
    synth::GenSpec spec{synth::GraphModel::barabasi_albert, static_cast<std::uint32_t>(nodes), 5,
                        0.0, 3, 42};
    return synth::generate_dataset(spec).graph;
}

void BM_ScoreUndirected(benchmark::State& state) {
    const Graph g = make_graph(state.range(0));
    const CommunityPartition p = louvain(g, 10.0, 42);
    const Graph pruned = prune_inter_community(g, p);
    for (auto _ : state) {
        auto scores = score_all(pruned, ScoreVariant::undirected, 0);
        benchmark::DoNotOptimize(scores);
    }
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(g.node_count()));
}
BENCHMARK(BM_ScoreUndirected)->Arg(100)->Arg(10000)->Arg(100000)->Unit(benchmark::kMillisecond);

void BM_ScoreDirected(benchmark::State& state) {
    const Graph g = make_graph(state.range(0));
    const CommunityPartition p = louvain(g, 10.0, 42);
    const Graph pruned = prune_inter_community(g, p);
    for (auto _ : state) {
        auto scores = score_all(pruned, ScoreVariant::directed, 0);
        benchmark::DoNotOptimize(scores);
    }
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(g.node_count()));
}
BENCHMARK(BM_ScoreDirected)->Arg(100)->Arg(10000)->Arg(100000)->Unit(benchmark::kMillisecond);

void BM_Louvain(benchmark::State& state) {
    const Graph g = make_graph(state.range(0));
    for (auto _ : state) {
        auto p = louvain(g, 10.0, 42);
        benchmark::DoNotOptimize(p);
    }
}
BENCHMARK(BM_Louvain)->Arg(10000)->Arg(100000)->Unit(benchmark::kMillisecond);

void BM_WorkerScaling(benchmark::State& state) {
    static const Graph pruned = [] {
        const Graph g = make_graph(10000);
        return prune_inter_community(g, louvain(g, 10.0, 42));
    }();
    for (auto _ : state) {
        auto scores =
            score_all(pruned, ScoreVariant::directed, static_cast<unsigned>(state.range(0)));
        benchmark::DoNotOptimize(scores);
    }
}
BENCHMARK(BM_WorkerScaling)->Arg(1)->Arg(2)->Arg(4)->Arg(8)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
