#include "gargaml/scoring.hpp"

#include <algorithm>
#include <atomic>
#include <stdexcept>
#include <thread>

namespace gargaml {

const char* to_string(ScoreVariant v) {
    return v == ScoreVariant::undirected ? "undirected" : "directed";
}

namespace {

bool contains(const std::vector<NodeId>& sorted, NodeId v) {
    return std::binary_search(sorted.begin(), sorted.end(), v);
}

std::uint64_t pairs(std::uint64_t k) { return k >= 2 ? k * (k - 1) : 0; }

GargAmlScore score_undirected_impl(const Graph& g, NodeId v) {
    const Neighbourhood nb = second_order_neighbourhood(g, v);
    const std::uint64_t n = nb.first_order.size();
    const std::uint64_t m = nb.second_order.size() + 1;

    UndirectedBlocks b;
    b.n = n;
    b.m = m;
    b.l1 = m >= 2 ? (m - 1) * (m - 2) : 0;  // m^2 - 3m + 2
    b.l2 = n * (m - 1);                     // mn - n
    b.l3 = pairs(n);                        // n^2 - n

    // Symmetrize: mutual arcs of a directed graph collapse to one pair.
    std::vector<Edge> pairs_list;
    pairs_list.reserve(nb.induced_edges.size());
    for (Edge e : nb.induced_edges) {
        if (e.src > e.dst) std::swap(e.src, e.dst);
        pairs_list.push_back(e);
    }
    if (g.directed()) {
        std::sort(pairs_list.begin(), pairs_list.end());
        pairs_list.erase(std::unique(pairs_list.begin(), pairs_list.end()), pairs_list.end());
    }

    // One undirected edge contributes two symmetric entries inside a diagonal
    // block and one entry to the cross block.
    std::uint64_t e22 = 0, e21 = 0, e11 = 0;
    for (const Edge& e : pairs_list) {
        if (e.src == v || e.dst == v) continue;  // forced centre row/column
        const bool src_first = contains(nb.first_order, e.src);
        const bool dst_first = contains(nb.first_order, e.dst);
        if (src_first && dst_first) {
            ++e11;
        } else if (!src_first && !dst_first) {
            ++e22;
        } else {
            ++e21;
        }
    }

    b.s1 = b.l1 ? static_cast<double>(2 * e22) / static_cast<double>(b.l1) : 0.0;
    b.s2 = b.l2 ? static_cast<double>(e21) / static_cast<double>(b.l2) : 0.0;
    b.s3 = b.l3 ? static_cast<double>(2 * e11) / static_cast<double>(b.l3) : 0.0;

    GargAmlScore out;
    out.node = v;
    out.variant = ScoreVariant::undirected;
    if (m == 1) {
        out.score = 0.0;  // no second-order neighbours: no evidence either way
    } else {
        const std::uint64_t lw = b.l1 + b.l3;
        const double sparse_part =
            lw ? (static_cast<double>(b.l1) * b.s1 + static_cast<double>(b.l3) * b.s3) /
                     static_cast<double>(lw)
               : 0.0;
        out.score = b.s2 - sparse_part;
    }
    out.blocks = b;
    return out;
}

// Directed levels for v, derived from one neighbourhood extraction.
struct DirectedContext {
    Neighbourhood nb;
    LevelAssignment levels;
};

DirectedContext directed_context(const Graph& g, NodeId v) {
    DirectedContext ctx;
    ctx.nb = second_order_neighbourhood(g, v);
    const std::vector<NodeId>& weak2 = ctx.nb.second_order;

    std::vector<bool> at_level2(weak2.size(), false);
    auto mark = [&](NodeId w) {
        const auto it = std::lower_bound(weak2.begin(), weak2.end(), w);
        if (it != weak2.end() && *it == w) at_level2[static_cast<std::size_t>(it - weak2.begin())] = true;
    };
    for (NodeId x : g.out_neighbours(v)) {
        for (NodeId w : g.out_neighbours(x)) mark(w);
    }
    for (NodeId x : g.in_neighbours(v)) {
        for (NodeId w : g.in_neighbours(x)) mark(w);
    }

    ctx.levels.level0.push_back(v);
    for (std::size_t i = 0; i < weak2.size(); ++i) {
        (at_level2[i] ? ctx.levels.level2 : ctx.levels.level0).push_back(weak2[i]);
    }
    ctx.levels.level1 = ctx.nb.first_order;
    return ctx;
}

GargAmlScore score_directed_impl(const Graph& g, NodeId v) {
    const DirectedContext ctx = directed_context(g, v);
    const std::uint64_t l = ctx.levels.level0.size();
    const std::uint64_t n = ctx.levels.level1.size();
    const std::uint64_t m = ctx.levels.level2.size();

    DirectedBlocks b;
    b.l = l;
    b.n = n;
    b.m = m;
    b.free_entries = {{{pairs(l - 1), l * n, (l - 1) * m},
                       {n * l, pairs(n), n * m},
                       {m * (l - 1), m * n, pairs(m)}}};

    // level1/level2 are sorted; anything else in the neighbourhood is level 0.
    const std::vector<NodeId>& lvl1 = ctx.levels.level1;
    const std::vector<NodeId>& lvl2 = ctx.levels.level2;
    auto level_of = [&](NodeId u) -> int {
        if (u == v) return 0;
        if (contains(lvl1, u)) return 1;
        if (contains(lvl2, u)) return 2;
        return 0;
    };

    // Structurally excluded cells (centre row/column towards level 0 and
    // level 2) can never hold an edge, so counting every arc by level is the
    // free-entry sum directly.
    std::array<std::array<std::uint64_t, 3>, 3> sums{};
    for (const Edge& e : ctx.nb.induced_edges) {
        sums[level_of(e.src)][level_of(e.dst)] += 1;
    }
    for (int i = 0; i < 3; ++i) {
        for (int j = 0; j < 3; ++j) {
            b.density[i][j] = b.free_entries[i][j]
                                  ? static_cast<double>(sums[i][j]) /
                                        static_cast<double>(b.free_entries[i][j])
                                  : 0.0;
        }
    }

    GargAmlScore out;
    out.node = v;
    out.variant = ScoreVariant::directed;
    const bool no_second_order = (l == 1 && m == 0);
    if (no_second_order) {
        out.score = 0.0;
    } else {
        const double dense = (b.density[0][1] + b.density[1][2]) / 2.0;
        const double sparse = (b.density[0][0] + b.density[0][2] + b.density[1][0] +
                               b.density[1][1] + b.density[2][0] + b.density[2][1] +
                               b.density[2][2]) /
                              7.0;
        out.score = dense - sparse;
    }
    out.blocks = b;
    return out;
}

}  // namespace

LevelAssignment assign_levels(const Graph& g, NodeId v) {
    if (!g.directed()) throw std::invalid_argument("assign_levels requires a directed graph");
    return directed_context(g, v).levels;
}

GargAmlScore score_undirected(const Graph& g, NodeId v) { return score_undirected_impl(g, v); }

GargAmlScore score_directed(const Graph& g, NodeId v) {
    if (!g.directed()) throw std::invalid_argument("score_directed requires a directed graph");
    return score_directed_impl(g, v);
}

namespace {

std::optional<std::vector<GargAmlScore>> score_all_impl(
    const Graph& g, ScoreVariant variant, unsigned workers,
    std::optional<std::chrono::steady_clock::time_point> deadline) {
    const std::size_t n = g.node_count();
    std::vector<GargAmlScore> results(n);
    if (n == 0) return results;

    if (workers == 0) workers = std::max(1u, std::thread::hardware_concurrency());
    workers = static_cast<unsigned>(std::min<std::size_t>(workers, n));

    std::atomic<std::size_t> next{0};
    std::atomic<bool> expired{false};
    constexpr std::size_t kChunk = 64;

    auto work = [&] {
        for (;;) {
            const std::size_t begin = next.fetch_add(kChunk);
            if (begin >= n || expired.load(std::memory_order_relaxed)) return;
            if (deadline && std::chrono::steady_clock::now() > *deadline) {
                expired.store(true, std::memory_order_relaxed);
                return;
            }
            const std::size_t end = std::min(begin + kChunk, n);
            for (std::size_t v = begin; v < end; ++v) {
                results[v] = variant == ScoreVariant::undirected
                                 ? score_undirected_impl(g, static_cast<NodeId>(v))
                                 : score_directed_impl(g, static_cast<NodeId>(v));
            }
        }
    };

    if (workers == 1) {
        work();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(workers);
        for (unsigned i = 0; i < workers; ++i) pool.emplace_back(work);
        for (auto& t : pool) t.join();
    }

    if (expired.load()) return std::nullopt;
    return results;
}

}  // namespace

std::vector<GargAmlScore> score_all(const Graph& g, ScoreVariant variant, unsigned workers) {
    auto r = score_all_impl(g, variant, workers, std::nullopt);
    return std::move(*r);
}

std::optional<std::vector<GargAmlScore>> score_all(const Graph& g, ScoreVariant variant,
                                                   unsigned workers,
                                                   std::chrono::steady_clock::time_point deadline) {
    return score_all_impl(g, variant, workers, deadline);
}

}  // namespace gargaml
