#pragma once

#include <chrono>
#include <cstdint>
#include <optional>

#include "gargaml/community.hpp"
#include "gargaml/graph.hpp"
#include "gargaml/scoring.hpp"

namespace gargaml {

// The full score calculation: Louvain on the undirected view, inter-community
// edges removed, then per-node scores on the pruned graph.
struct PipelineConfig {
    ScoreVariant variant = ScoreVariant::undirected;
    double resolution = 10.0;
    unsigned workers = 0;  // 0 = hardware concurrency
    std::uint64_t seed = 0;
};

struct PipelineResult {
    CommunityPartition partition;
    Graph pruned;
    std::vector<GargAmlScore> scores;
    double louvain_seconds = 0.0;
    double scoring_seconds = 0.0;
};

PipelineResult run_scoring_pipeline(const Graph& g, const PipelineConfig& cfg);

// Deadline-aware flavour for benchmarking; returns nullopt when the deadline
// passed. The deadline is checked between phases and inside the scoring loop.
std::optional<PipelineResult> run_scoring_pipeline(
    const Graph& g, const PipelineConfig& cfg,
    std::optional<std::chrono::steady_clock::time_point> deadline);

}  // namespace gargaml
