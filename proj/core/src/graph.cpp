#include "gargaml/graph.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

namespace gargaml {

namespace {

void build_csr(std::size_t node_count, const std::vector<Edge>& arcs,
               std::vector<std::size_t>& offsets, std::vector<NodeId>& targets) {
    offsets.assign(node_count + 1, 0);
    for (const Edge& e : arcs) ++offsets[e.src + 1];
    for (std::size_t i = 1; i <= node_count; ++i) offsets[i] += offsets[i - 1];
    targets.resize(arcs.size());
    std::vector<std::size_t> cursor(offsets.begin(), offsets.end() - 1);
    for (const Edge& e : arcs) targets[cursor[e.src]++] = e.dst;
    for (std::size_t v = 0; v < node_count; ++v) {
        std::sort(targets.begin() + static_cast<std::ptrdiff_t>(offsets[v]),
                  targets.begin() + static_cast<std::ptrdiff_t>(offsets[v + 1]));
    }
}

}  // namespace

Graph Graph::from_edges(std::vector<Edge> edges, bool directed, std::size_t node_count) {
    std::size_t max_id_plus_1 = 0;
    for (const Edge& e : edges) {
        max_id_plus_1 = std::max<std::size_t>(max_id_plus_1, std::size_t{e.src} + 1);
        max_id_plus_1 = std::max<std::size_t>(max_id_plus_1, std::size_t{e.dst} + 1);
    }
    if (node_count == 0) {
        node_count = max_id_plus_1;
    } else if (max_id_plus_1 > node_count) {
        throw std::invalid_argument("node id " + std::to_string(max_id_plus_1 - 1) +
                                    " out of range for node_count " + std::to_string(node_count));
    }

    // Drop self-loops, canonicalise undirected pairs, deduplicate.
    std::erase_if(edges, [](const Edge& e) { return e.src == e.dst; });
    if (!directed) {
        for (Edge& e : edges) {
            if (e.src > e.dst) std::swap(e.src, e.dst);
        }
    }
    std::sort(edges.begin(), edges.end());
    edges.erase(std::unique(edges.begin(), edges.end()), edges.end());

    Graph g;
    g.directed_ = directed;
    g.node_count_ = node_count;
    g.edge_count_ = edges.size();

    if (directed) {
        build_csr(node_count, edges, g.out_offsets_, g.out_);
        std::vector<Edge> reversed(edges.size());
        for (std::size_t i = 0; i < edges.size(); ++i) reversed[i] = {edges[i].dst, edges[i].src};
        build_csr(node_count, reversed, g.in_offsets_, g.in_);

        std::vector<Edge> sym;
        sym.reserve(edges.size() * 2);
        for (const Edge& e : edges) {
            sym.push_back(e);
            sym.push_back({e.dst, e.src});
        }
        std::sort(sym.begin(), sym.end());
        sym.erase(std::unique(sym.begin(), sym.end()), sym.end());
        build_csr(node_count, sym, g.und_offsets_, g.und_);
    } else {
        std::vector<Edge> both;
        both.reserve(edges.size() * 2);
        for (const Edge& e : edges) {
            both.push_back(e);
            both.push_back({e.dst, e.src});
        }
        build_csr(node_count, both, g.out_offsets_, g.out_);
    }
    return g;
}

bool Graph::has_edge(NodeId src, NodeId dst) const {
    if (src >= node_count_ || dst >= node_count_) return false;
    const auto adj = out_neighbours(src);
    return std::binary_search(adj.begin(), adj.end(), dst);
}

Graph Graph::undirected_view() const {
    if (!directed_) return *this;
    std::vector<Edge> es = edges();
    return Graph::from_edges(std::move(es), /*directed=*/false, node_count_);
}

std::vector<Edge> Graph::edges() const {
    std::vector<Edge> out;
    out.reserve(edge_count_);
    for (NodeId v = 0; v < node_count_; ++v) {
        for (NodeId w : out_neighbours(v)) {
            if (!directed_ && w < v) continue;
            out.push_back({v, w});
        }
    }
    return out;
}

Neighbourhood second_order_neighbourhood(const Graph& g, NodeId v) {
    Neighbourhood nb;
    nb.center = v;
    const auto n1 = g.neighbours(v);
    nb.first_order.assign(n1.begin(), n1.end());

    for (NodeId u : nb.first_order) {
        for (NodeId w : g.neighbours(u)) {
            if (w == v) continue;
            if (std::binary_search(nb.first_order.begin(), nb.first_order.end(), w)) continue;
            nb.second_order.push_back(w);
        }
    }
    std::sort(nb.second_order.begin(), nb.second_order.end());
    nb.second_order.erase(std::unique(nb.second_order.begin(), nb.second_order.end()),
                          nb.second_order.end());

    std::vector<NodeId> members;
    members.reserve(1 + nb.first_order.size() + nb.second_order.size());
    members.push_back(v);
    members.insert(members.end(), nb.first_order.begin(), nb.first_order.end());
    members.insert(members.end(), nb.second_order.begin(), nb.second_order.end());
    std::sort(members.begin(), members.end());

    for (NodeId u : members) {
        for (NodeId w : g.out_neighbours(u)) {
            if (!g.directed() && w < u) continue;
            if (std::binary_search(members.begin(), members.end(), w)) {
                nb.induced_edges.push_back({u, w});
            }
        }
    }
    return nb;
}

std::vector<NodeId> strong_second_order(const Graph& g, NodeId v) {
    if (!g.directed()) throw std::invalid_argument("strong_second_order requires a directed graph");
    const Neighbourhood nb = second_order_neighbourhood(g, v);
    std::vector<NodeId> hits;
    for (NodeId x : g.out_neighbours(v)) {
        for (NodeId w : g.out_neighbours(x)) {
            if (std::binary_search(nb.second_order.begin(), nb.second_order.end(), w)) {
                hits.push_back(w);
            }
        }
    }
    std::sort(hits.begin(), hits.end());
    hits.erase(std::unique(hits.begin(), hits.end()), hits.end());
    return hits;
}

}  // namespace gargaml
