#include "gargaml/pipeline.hpp"

namespace gargaml {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

}  // namespace

std::optional<PipelineResult> run_scoring_pipeline(
    const Graph& g, const PipelineConfig& cfg,
    std::optional<Clock::time_point> deadline) {
    PipelineResult result;
    if (g.node_count() == 0) return result;

    auto expired = [&] { return deadline && Clock::now() > *deadline; };

    const auto louvain_start = Clock::now();
    result.partition = louvain(g, cfg.resolution, cfg.seed);
    result.pruned = prune_inter_community(g, result.partition);
    result.louvain_seconds = seconds_since(louvain_start);
    if (expired()) return std::nullopt;

    const auto scoring_start = Clock::now();
    if (deadline) {
        auto scores = score_all(result.pruned, cfg.variant, cfg.workers, *deadline);
        if (!scores) return std::nullopt;
        result.scores = std::move(*scores);
    } else {
        result.scores = score_all(result.pruned, cfg.variant, cfg.workers);
    }
    result.scoring_seconds = seconds_since(scoring_start);
    return result;
}

PipelineResult run_scoring_pipeline(const Graph& g, const PipelineConfig& cfg) {
    auto r = run_scoring_pipeline(g, cfg, std::nullopt);
    return std::move(*r);
}

}  // namespace gargaml
