#pragma once

#include <array>
#include <chrono>
#include <cstdint>
#include <optional>
#include <variant>
#include <vector>

#include "gargaml/graph.hpp"

namespace gargaml {

enum class ScoreVariant { undirected, directed };

const char* to_string(ScoreVariant v);

// Block densities of the ordered second-order-neighbourhood adjacency matrix,
// undirected layout: centre row first, then the m-1 second-order rows, then
// the n first-order rows. Densities are over free entries only; a block with
// zero free entries has density 0 and weight 0.
struct UndirectedBlocks {
    double s1 = 0.0;  // second-order block, (m-1)(m-2) free entries
    double s2 = 0.0;  // cross block minus the forced centre row, n(m-1) free
    double s3 = 0.0;  // first-order block, n(n-1) free
    std::uint64_t l1 = 0;  // m^2 - 3m + 2
    std::uint64_t l2 = 0;  // mn - n
    std::uint64_t l3 = 0;  // n^2 - n
    std::uint64_t n = 0;   // |N1|
    std::uint64_t m = 0;   // |N2| + 1
};

// Directed layout: level 0 (centre plus distance-2 nodes without a directed
// length-2 path either way), level 1 (all direct counterparties), level 2
// (remaining distance-2 nodes). Nine blocks with the structural exclusions:
// centre row/column of b00, diagonals of b00/b11/b22, centre row of b02,
// centre column of b20.
struct DirectedBlocks {
    std::array<std::array<double, 3>, 3> density{};
    std::array<std::array<std::uint64_t, 3>, 3> free_entries{};
    std::uint64_t l = 0;  // level-0 size, centre included
    std::uint64_t n = 0;  // level-1 size
    std::uint64_t m = 0;  // level-2 size
};

struct GargAmlScore {
    NodeId node = 0;
    double score = 0.0;  // in [-1, 1]; 0 for degenerate neighbourhoods
    ScoreVariant variant = ScoreVariant::undirected;
    std::variant<UndirectedBlocks, DirectedBlocks> blocks;

    const UndirectedBlocks& undirected_blocks() const { return std::get<UndirectedBlocks>(blocks); }
    const DirectedBlocks& directed_blocks() const { return std::get<DirectedBlocks>(blocks); }
};

struct LevelAssignment {
    std::vector<NodeId> level0;  // centre first, remainder sorted
    std::vector<NodeId> level1;  // sorted
    std::vector<NodeId> level2;  // sorted
};

// Distributes v and its second-order neighbourhood over the three directed
// levels. A distance-2 node goes to level 0 iff there is no directed length-2
// path v->w and none w->v; every other distance-2 node goes to level 2.
LevelAssignment assign_levels(const Graph& g, NodeId v);

// Undirected score from the three block densities. Directed inputs are
// symmetrized. Nodes without second-order neighbours score a neutral 0.
GargAmlScore score_undirected(const Graph& g, NodeId v);

// Directed score from the nine block densities: mean(s01, s12) minus the
// unweighted mean of the remaining seven.
GargAmlScore score_directed(const Graph& g, NodeId v);

// One score per node, distributed over `workers` threads (0 = hardware
// concurrency). Output is independent of worker count and visit order.
std::vector<GargAmlScore> score_all(const Graph& g, ScoreVariant variant, unsigned workers = 0);

// Deadline-aware variant for benchmarking; returns nullopt when the deadline
// passed before every node was scored.
std::optional<std::vector<GargAmlScore>> score_all(
    const Graph& g, ScoreVariant variant, unsigned workers,
    std::chrono::steady_clock::time_point deadline);

}  // namespace gargaml
