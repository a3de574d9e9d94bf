#pragma once

#include <compare>
#include <cstdint>
#include <span>
#include <vector>

namespace gargaml {

using NodeId = std::uint32_t;

struct Edge {
    NodeId src = 0;
    NodeId dst = 0;
    friend bool operator==(const Edge&, const Edge&) = default;
    friend auto operator<=>(const Edge&, const Edge&) = default;
};

// Immutable simple graph over dense integer node ids. Construction collapses
// parallel edges and drops self-loops; weights are never kept (scores run on
// 0/1 adjacency). All read accessors are safe to call concurrently.
class Graph {
public:
    Graph() = default;

    // node_count 0 means "max id + 1". Throws std::invalid_argument when an
    // explicit node_count does not cover every id.
    static Graph from_edges(std::vector<Edge> edges, bool directed, std::size_t node_count = 0);

    bool directed() const { return directed_; }
    std::size_t node_count() const { return node_count_; }
    // Unique edges: ordered pairs for directed graphs, unordered otherwise.
    std::size_t edge_count() const { return edge_count_; }

    std::span<const NodeId> out_neighbours(NodeId v) const { return slice(out_offsets_, out_, v); }
    std::span<const NodeId> in_neighbours(NodeId v) const {
        return directed_ ? slice(in_offsets_, in_, v) : slice(out_offsets_, out_, v);
    }
    // Undirected adjacency (union of both arc directions), sorted.
    std::span<const NodeId> neighbours(NodeId v) const {
        return directed_ ? slice(und_offsets_, und_, v) : slice(out_offsets_, out_, v);
    }
    std::size_t degree(NodeId v) const { return neighbours(v).size(); }

    // Directed: exact arc src->dst. Undirected: either endpoint order.
    bool has_edge(NodeId src, NodeId dst) const;

    // Symmetrized copy; edge (u,v) present iff (u,v) or (v,u) was. Idempotent.
    Graph undirected_view() const;

    // Canonical sorted edge list (undirected edges as (low, high) once).
    std::vector<Edge> edges() const;

private:
    static std::span<const NodeId> slice(const std::vector<std::size_t>& offsets,
                                         const std::vector<NodeId>& targets, NodeId v) {
        return {targets.data() + offsets[v], offsets[v + 1] - offsets[v]};
    }

    bool directed_ = false;
    std::size_t node_count_ = 0;
    std::size_t edge_count_ = 0;
    // CSR adjacency. Undirected graphs store both directions in out_ and leave
    // in_/und_ empty; directed graphs carry all three.
    std::vector<std::size_t> out_offsets_{0};
    std::vector<NodeId> out_;
    std::vector<std::size_t> in_offsets_{0};
    std::vector<NodeId> in_;
    std::vector<std::size_t> und_offsets_{0};
    std::vector<NodeId> und_;
};

// Second-order neighbourhood of a centre node: first_order at undirected
// distance exactly 1, second_order at undirected distance exactly 2, plus
// every graph edge whose endpoints both lie in {centre} ∪ N1 ∪ N2. Scoring
// works from this record alone and never touches the global graph again.
struct Neighbourhood {
    NodeId center = 0;
    std::vector<NodeId> first_order;   // sorted
    std::vector<NodeId> second_order;  // sorted
    std::vector<Edge> induced_edges;   // arcs if the graph is directed, canonical pairs otherwise
};

Neighbourhood second_order_neighbourhood(const Graph& g, NodeId v);

// Nodes w at undirected distance exactly 2 from v that are reachable via a
// directed length-2 path v -> x -> w. Directed graphs only.
std::vector<NodeId> strong_second_order(const Graph& g, NodeId v);

}  // namespace gargaml
