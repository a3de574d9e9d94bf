#include "gargaml/community.hpp"

#include <algorithm>
#include <cstddef>
#include <numeric>
#include <stdexcept>
#include <unordered_map>

#include "gargaml/rng.hpp"

namespace gargaml {

namespace {

// Weighted aggregate graph used between Louvain levels. Self-loop weight is
// stored once; it counts twice towards the node degree.
struct LevelGraph {
    std::vector<std::vector<std::pair<std::uint32_t, double>>> adj;
    std::vector<double> loops;
    std::vector<double> degree;
    double total_weight = 0.0;  // sum of edge weights, loops included once

    std::size_t size() const { return adj.size(); }

    void finish() {
        degree.assign(size(), 0.0);
        double deg_sum = 0.0;
        for (std::size_t v = 0; v < size(); ++v) {
            double d = 2.0 * loops[v];
            for (auto& [w, wt] : adj[v]) {
                (void)w;
                d += wt;
            }
            degree[v] = d;
            deg_sum += d;
        }
        total_weight = deg_sum / 2.0;
    }
};

LevelGraph level_from_graph(const Graph& g) {
    const Graph und = g.directed() ? g.undirected_view() : g;
    LevelGraph lg;
    lg.adj.resize(und.node_count());
    lg.loops.assign(und.node_count(), 0.0);
    for (NodeId v = 0; v < und.node_count(); ++v) {
        lg.adj[v].reserve(und.neighbours(v).size());
        for (NodeId w : und.neighbours(v)) lg.adj[v].push_back({w, 1.0});
    }
    lg.finish();
    return lg;
}

// One pass of local moves. Returns the node->community assignment for this
// level and whether any node moved.
bool one_level(const LevelGraph& lg, double gamma, Rng& rng, std::vector<std::uint32_t>& node2com) {
    const std::size_t n = lg.size();
    node2com.resize(n);
    std::iota(node2com.begin(), node2com.end(), 0u);
    if (lg.total_weight <= 0.0) return false;

    std::vector<double> com_tot(lg.degree.begin(), lg.degree.end());
    std::vector<std::uint32_t> order(n);
    std::iota(order.begin(), order.end(), 0u);
    {
        std::vector<std::uint32_t> tmp(order);
        rng.shuffle(tmp);
        order = std::move(tmp);
    }

    const double m = lg.total_weight;
    std::vector<double> com_weight;        // scratch: weight from node to community
    std::vector<std::uint32_t> touched;    // communities seen this node, adjacency order
    com_weight.assign(n, 0.0);

    bool any_move = false;
    bool moved = true;
    while (moved) {
        moved = false;
        for (std::uint32_t v : order) {
            const std::uint32_t old_com = node2com[v];
            touched.clear();
            for (const auto& [w, wt] : lg.adj[v]) {
                const std::uint32_t c = node2com[w];
                if (com_weight[c] == 0.0) touched.push_back(c);
                com_weight[c] += wt;
            }
            com_tot[old_com] -= lg.degree[v];

            // Candidate communities: neighbours' plus the old one. Gain of
            // joining c (up to a constant factor): k_vc - gamma*tot_c*deg_v/2m.
            auto gain_of = [&](std::uint32_t c) {
                return com_weight[c] - gamma * com_tot[c] * lg.degree[v] / (2.0 * m);
            };
            std::uint32_t best_com = old_com;
            double best_gain = gain_of(old_com);
            for (std::uint32_t c : touched) {
                const double gain = gain_of(c);
                if (gain > best_gain || (gain == best_gain && c < best_com)) {
                    best_gain = gain;
                    best_com = c;
                }
            }

            com_tot[best_com] += lg.degree[v];
            node2com[v] = best_com;
            for (std::uint32_t c : touched) com_weight[c] = 0.0;
            if (best_com != old_com) {
                moved = true;
                any_move = true;
            }
        }
    }
    return any_move;
}

std::uint32_t renumber(std::vector<std::uint32_t>& assignment) {
    std::unordered_map<std::uint32_t, std::uint32_t> remap;
    remap.reserve(assignment.size());
    std::uint32_t next = 0;
    for (std::uint32_t& c : assignment) {
        auto [it, inserted] = remap.try_emplace(c, next);
        if (inserted) ++next;
        c = it->second;
    }
    return next;
}

LevelGraph aggregate(const LevelGraph& lg, const std::vector<std::uint32_t>& node2com,
                     std::uint32_t com_count) {
    LevelGraph agg;
    agg.adj.resize(com_count);
    agg.loops.assign(com_count, 0.0);
    std::unordered_map<std::uint64_t, double> weights;
    for (std::size_t v = 0; v < lg.size(); ++v) {
        const std::uint32_t cv = node2com[v];
        agg.loops[cv] += lg.loops[v];
        for (const auto& [w, wt] : lg.adj[v]) {
            if (w < v) continue;  // each undirected edge once
            const std::uint32_t cw = node2com[w];
            if (cv == cw) {
                agg.loops[cv] += wt;
            } else {
                const std::uint64_t key = (std::uint64_t{std::min(cv, cw)} << 32) | std::max(cv, cw);
                weights[key] += wt;
            }
        }
    }
    for (const auto& [key, wt] : weights) {
        const auto a = static_cast<std::uint32_t>(key >> 32);
        const auto b = static_cast<std::uint32_t>(key & 0xffffffffu);
        agg.adj[a].push_back({b, wt});
        agg.adj[b].push_back({a, wt});
    }
    for (auto& nbrs : agg.adj) std::sort(nbrs.begin(), nbrs.end());
    agg.finish();
    return agg;
}

}  // namespace

double modularity(const Graph& g, const std::vector<std::uint32_t>& assignment, double resolution) {
    const Graph und = g.directed() ? g.undirected_view() : g;
    if (assignment.size() != und.node_count()) {
        throw std::invalid_argument("partition does not cover the graph");
    }
    const double m = static_cast<double>(und.edge_count());
    if (m == 0.0) return 0.0;
    const std::uint32_t com_count =
        assignment.empty() ? 0 : *std::max_element(assignment.begin(), assignment.end()) + 1;
    std::vector<double> intra(com_count, 0.0), tot(com_count, 0.0);
    for (NodeId v = 0; v < und.node_count(); ++v) {
        tot[assignment[v]] += static_cast<double>(und.degree(v));
        for (NodeId w : und.neighbours(v)) {
            if (w < v) continue;
            if (assignment[v] == assignment[w]) intra[assignment[v]] += 1.0;
        }
    }
    double q = 0.0;
    for (std::uint32_t c = 0; c < com_count; ++c) {
        const double frac = tot[c] / (2.0 * m);
        q += intra[c] / m - resolution * frac * frac;
    }
    return q;
}

CommunityPartition louvain(const Graph& g, double resolution, std::uint64_t seed) {
    if (g.node_count() == 0) throw std::invalid_argument("louvain requires a non-empty graph");
    if (resolution <= 0.0) throw std::invalid_argument("resolution must be positive");

    Rng rng(Rng::derive(seed, "louvain"));
    LevelGraph level = level_from_graph(g);

    std::vector<std::uint32_t> assignment(g.node_count());
    std::iota(assignment.begin(), assignment.end(), 0u);

    constexpr int kMaxLevels = 100;
    for (int depth = 0; depth < kMaxLevels; ++depth) {
        std::vector<std::uint32_t> node2com;
        const bool improved = one_level(level, resolution, rng, node2com);
        if (!improved) break;
        const std::uint32_t com_count = renumber(node2com);
        for (std::uint32_t& c : assignment) c = node2com[c];
        if (com_count == level.size()) break;
        level = aggregate(level, node2com, com_count);
    }

    CommunityPartition p;
    p.assignment = std::move(assignment);
    p.community_count = renumber(p.assignment);
    p.modularity = modularity(g, p.assignment, resolution);
    return p;
}

Graph prune_inter_community(const Graph& g, const CommunityPartition& p) {
    if (p.assignment.size() != g.node_count()) {
        throw std::invalid_argument("partition does not cover the graph");
    }
    std::vector<Edge> kept;
    for (const Edge& e : g.edges()) {
        if (p.assignment[e.src] == p.assignment[e.dst]) kept.push_back(e);
    }
    return Graph::from_edges(std::move(kept), g.directed(), g.node_count());
}

}  // namespace gargaml
