#include "gargaml/synthgen.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <unordered_set>

#include "gargaml/rng.hpp"

namespace gargaml::synth {

const char* to_string(GraphModel m) {
    switch (m) {
        case GraphModel::barabasi_albert: return "ba";
        case GraphModel::erdos_renyi: return "er";
        case GraphModel::watts_strogatz: return "ws";
    }
    return "?";
}

std::optional<GraphModel> parse_model(std::string_view s) {
    if (s == "ba" || s == "barabasi_albert" || s == "barabasi-albert") return GraphModel::barabasi_albert;
    if (s == "er" || s == "erdos_renyi" || s == "erdos-renyi") return GraphModel::erdos_renyi;
    if (s == "ws" || s == "watts_strogatz" || s == "watts-strogatz") return GraphModel::watts_strogatz;
    return std::nullopt;
}

const char* to_string(PatternMode m) {
    switch (m) {
        case PatternMode::separate: return "separate";
        case PatternMode::new_mules: return "new_mules";
        case PatternMode::existing_mules: return "existing_mules";
    }
    return "?";
}

const char* to_string(PatternTag t) {
    switch (t) {
        case PatternTag::none: return "none";
        case PatternTag::separate: return "separate";
        case PatternTag::new_mules: return "new_mules";
        case PatternTag::existing_mules: return "existing_mules";
    }
    return "?";
}

std::optional<PatternTag> parse_pattern_tag(std::string_view s) {
    if (s == "none") return PatternTag::none;
    if (s == "separate") return PatternTag::separate;
    if (s == "new_mules") return PatternTag::new_mules;
    if (s == "existing_mules") return PatternTag::existing_mules;
    return std::nullopt;
}

void GenSpec::validate() const {
    if (n_nodes == 0) throw std::invalid_argument("n_nodes must be positive");
    switch (model) {
        case GraphModel::barabasi_albert:
            if (m_edges == 0) throw std::invalid_argument("barabasi_albert requires m_edges >= 1");
            if (m_edges >= n_nodes) throw std::invalid_argument("barabasi_albert requires m_edges < n_nodes");
            if (p_edge != 0.0) throw std::invalid_argument("barabasi_albert takes no edge probability");
            break;
        case GraphModel::erdos_renyi:
            if (m_edges != 0) throw std::invalid_argument("erdos_renyi takes no edge count parameter");
            if (p_edge < 0.0 || p_edge > 1.0) throw std::invalid_argument("edge probability must be in [0, 1]");
            break;
        case GraphModel::watts_strogatz:
            if (m_edges == 0) throw std::invalid_argument("watts_strogatz requires m_edges >= 1");
            if (2 * m_edges >= n_nodes) throw std::invalid_argument("watts_strogatz ring degree too large");
            if (p_edge < 0.0 || p_edge > 1.0) throw std::invalid_argument("rewiring probability must be in [0, 1]");
            break;
    }
    if (n_patterns == 0) throw std::invalid_argument("n_patterns must be positive");
}

std::string GenSpec::name() const {
    auto fmt_p = [](double p) {
        std::string s = std::to_string(p);
        while (s.size() > 1 && s.back() == '0') s.pop_back();
        if (!s.empty() && s.back() == '.') s.pop_back();
        return s;
    };
    std::string out = std::string(to_string(model)) + "_n" + std::to_string(n_nodes);
    if (model != GraphModel::erdos_renyi) out += "_m" + std::to_string(m_edges);
    if (model != GraphModel::barabasi_albert) out += "_p" + fmt_p(p_edge);
    out += "_x" + std::to_string(n_patterns);
    return out;
}

std::size_t SyntheticDataset::labelled_count() const {
    return static_cast<std::size_t>(std::count(labels.begin(), labels.end(), std::uint8_t{1}));
}

double SyntheticDataset::label_rate() const {
    return labels.empty() ? 0.0 : static_cast<double>(labelled_count()) / static_cast<double>(labels.size());
}

namespace {

std::uint64_t edge_key(NodeId a, NodeId b) {
    if (a > b) std::swap(a, b);
    return (std::uint64_t{a} << 32) | b;
}

std::vector<Edge> barabasi_albert_edges(std::uint32_t n, std::uint32_t m, Rng& rng) {
    std::vector<Edge> edges;
    edges.reserve(std::size_t{n - m} * m);
    std::vector<NodeId> targets(m);
    std::iota(targets.begin(), targets.end(), 0u);
    std::vector<NodeId> repeated;
    repeated.reserve(2 * edges.capacity());
    for (NodeId source = m; source < n; ++source) {
        for (NodeId t : targets) {
            edges.push_back({source, t});
            repeated.push_back(t);
            repeated.push_back(source);
        }
        // m distinct preferential picks for the next node.
        std::unordered_set<NodeId> picked;
        while (picked.size() < m) {
            picked.insert(repeated[rng.uniform_u64(repeated.size())]);
        }
        targets.assign(picked.begin(), picked.end());
        std::sort(targets.begin(), targets.end());
    }
    return edges;
}

std::vector<Edge> erdos_renyi_edges(std::uint32_t n, double p, Rng& rng) {
    std::vector<Edge> edges;
    if (p <= 0.0 || n < 2) return edges;
    if (p >= 1.0) {
        for (NodeId v = 1; v < n; ++v) {
            for (NodeId w = 0; w < v; ++w) edges.push_back({v, w});
        }
        return edges;
    }
    // Geometric skips over the lower-triangle cells.
    const double log1p_inv = 1.0 / std::log(1.0 - p);
    std::int64_t v = 1, w = -1;
    while (v < static_cast<std::int64_t>(n)) {
        const double r = 1.0 - rng.uniform_real();  // (0, 1]
        w += 1 + static_cast<std::int64_t>(std::floor(std::log(r) * log1p_inv));
        while (w >= v && v < static_cast<std::int64_t>(n)) {
            w -= v;
            ++v;
        }
        if (v < static_cast<std::int64_t>(n)) {
            edges.push_back({static_cast<NodeId>(v), static_cast<NodeId>(w)});
        }
    }
    return edges;
}

std::vector<Edge> watts_strogatz_edges(std::uint32_t n, std::uint32_t m, double p, Rng& rng) {
    std::vector<Edge> edges;
    edges.reserve(std::size_t{n} * m);
    std::unordered_set<std::uint64_t> present;
    present.reserve(std::size_t{n} * m * 2);
    for (std::uint32_t j = 1; j <= m; ++j) {
        for (NodeId u = 0; u < n; ++u) {
            const NodeId w = static_cast<NodeId>((u + j) % n);
            edges.push_back({u, w});
            present.insert(edge_key(u, w));
        }
    }
    // Rewire the far endpoint of each ring edge with probability p, keeping
    // the edge count fixed; an edge stays put when no fresh target turns up.
    for (Edge& e : edges) {
        if (!rng.bernoulli(p)) continue;
        for (std::uint32_t attempt = 0; attempt < n; ++attempt) {
            const NodeId cand = static_cast<NodeId>(rng.uniform_u64(n));
            if (cand == e.src || present.contains(edge_key(e.src, cand))) continue;
            present.erase(edge_key(e.src, e.dst));
            present.insert(edge_key(e.src, cand));
            e.dst = cand;
            break;
        }
    }
    return edges;
}

void orient_edges(std::vector<Edge>& edges, Rng& rng) {
    for (Edge& e : edges) {
        if (rng.bernoulli(0.5)) std::swap(e.src, e.dst);
    }
}

std::vector<Edge> base_edges(const GenSpec& spec) {
    Rng base_rng(Rng::derive(spec.seed, "base"));
    std::vector<Edge> edges;
    switch (spec.model) {
        case GraphModel::barabasi_albert:
            edges = barabasi_albert_edges(spec.n_nodes, spec.m_edges, base_rng);
            break;
        case GraphModel::erdos_renyi:
            edges = erdos_renyi_edges(spec.n_nodes, spec.p_edge, base_rng);
            break;
        case GraphModel::watts_strogatz:
            edges = watts_strogatz_edges(spec.n_nodes, spec.m_edges, spec.p_edge, base_rng);
            break;
    }
    Rng orient_rng(Rng::derive(spec.seed, "orient"));
    orient_edges(edges, orient_rng);
    return edges;
}

// Shared injection core operating on a growing edge list.
struct PatternBuilder {
    std::vector<Edge>& edges;
    std::uint32_t& node_count;
    std::vector<std::uint8_t>& labels;
    std::vector<PatternTag>& tags;

    void grow_to(std::uint32_t n) {
        node_count = std::max(node_count, n);
        labels.resize(node_count, 0);
        tags.resize(node_count, PatternTag::none);
    }

    NodeId add_node() {
        grow_to(node_count + 1);
        return node_count - 1;
    }

    void mark(NodeId v, PatternTag tag) {
        labels[v] = 1;
        tags[v] = tag;
    }

    // Nodes eligible for sampling: everything except separate-pattern members,
    // so injected separate components stay disconnected from the rest.
    std::vector<NodeId> eligible() const {
        std::vector<NodeId> out;
        out.reserve(node_count);
        for (NodeId v = 0; v < node_count; ++v) {
            if (tags[v] != PatternTag::separate) out.push_back(v);
        }
        return out;
    }

    void inject(PatternMode mode, std::uint32_t k, Rng& rng) {
        if (k < 2 || k > 10) throw std::invalid_argument("smurf count must be in [2, 10]");
        NodeId sender = 0, receiver = 0;
        std::vector<NodeId> mules;
        mules.reserve(k);
        switch (mode) {
            case PatternMode::separate: {
                sender = add_node();
                for (std::uint32_t i = 0; i < k; ++i) mules.push_back(add_node());
                receiver = add_node();
                break;
            }
            case PatternMode::new_mules: {
                const auto pool = eligible();
                if (pool.size() < 2) throw std::invalid_argument("new_mules needs at least 2 eligible nodes");
                const auto picks = rng.sample_without_replacement(pool.size(), 2);
                sender = pool[picks[0]];
                receiver = pool[picks[1]];
                for (std::uint32_t i = 0; i < k; ++i) mules.push_back(add_node());
                break;
            }
            case PatternMode::existing_mules: {
                const auto pool = eligible();
                if (pool.size() < std::size_t{k} + 2) {
                    throw std::invalid_argument("existing_mules needs at least smurf_count + 2 eligible nodes");
                }
                const auto picks = rng.sample_without_replacement(pool.size(), std::size_t{k} + 2);
                sender = pool[picks[0]];
                receiver = pool[picks[1]];
                for (std::uint32_t i = 0; i < k; ++i) mules.push_back(pool[picks[2 + i]]);
                break;
            }
        }
        const PatternTag tag = mode == PatternMode::separate   ? PatternTag::separate
                               : mode == PatternMode::new_mules ? PatternTag::new_mules
                                                                : PatternTag::existing_mules;
        mark(sender, tag);
        mark(receiver, tag);
        for (NodeId mule : mules) {
            mark(mule, tag);
            edges.push_back({sender, mule});
            edges.push_back({mule, receiver});
        }
    }
};

}  // namespace

Graph generate_base(const GenSpec& spec) {
    spec.validate();
    return Graph::from_edges(base_edges(spec), /*directed=*/true, spec.n_nodes);
}

std::pair<Graph, std::vector<NodeId>> inject_pattern(const Graph& g, PatternMode mode,
                                                     std::uint32_t smurf_count,
                                                     std::uint64_t seed) {
    std::vector<Edge> edges = g.edges();
    auto node_count = static_cast<std::uint32_t>(g.node_count());
    std::vector<std::uint8_t> labels(node_count, 0);
    std::vector<PatternTag> tags(node_count, PatternTag::none);
    PatternBuilder builder{edges, node_count, labels, tags};
    Rng rng(Rng::derive(seed, "inject"));
    builder.inject(mode, smurf_count, rng);

    std::vector<NodeId> participants;
    for (NodeId v = 0; v < node_count; ++v) {
        if (labels[v]) participants.push_back(v);
    }
    return {Graph::from_edges(std::move(edges), g.directed(), node_count), std::move(participants)};
}

SyntheticDataset generate_dataset(const GenSpec& spec) {
    spec.validate();
    std::vector<Edge> edges = base_edges(spec);
    std::uint32_t node_count = spec.n_nodes;
    std::vector<std::uint8_t> labels(node_count, 0);
    std::vector<PatternTag> tags(node_count, PatternTag::none);
    PatternBuilder builder{edges, node_count, labels, tags};

    Rng rng(Rng::derive(spec.seed, "inject"));
    // Separate patterns first so later draws can sample the grown graph.
    for (const PatternMode mode :
         {PatternMode::separate, PatternMode::new_mules, PatternMode::existing_mules}) {
        for (std::uint32_t i = 0; i < spec.n_patterns; ++i) {
            const auto k = static_cast<std::uint32_t>(2 + rng.uniform_u64(9));  // [2, 10]
            builder.inject(mode, k, rng);
        }
    }

    SyntheticDataset ds;
    ds.graph = Graph::from_edges(std::move(edges), /*directed=*/true, node_count);
    ds.labels = std::move(labels);
    ds.tags = std::move(tags);
    ds.spec = spec;
    return ds;
}

std::vector<GenSpec> full_grid(std::uint64_t base_seed) {
    std::vector<GenSpec> grid;
    const std::uint32_t sizes[] = {100, 10000, 100000};
    const std::uint32_t ms[] = {1, 2, 5};
    const double ps[] = {0.001, 0.01};
    const std::uint32_t patterns[] = {3, 5};

    auto push = [&](GenSpec spec) {
        spec.seed = Rng::derive(base_seed, spec.name());
        spec.validate();
        grid.push_back(spec);
    };
    for (std::uint32_t n : sizes) {
        for (std::uint32_t m : ms) {
            for (std::uint32_t x : patterns) {
                push({GraphModel::barabasi_albert, n, m, 0.0, x, 0});
            }
        }
    }
    for (std::uint32_t n : sizes) {
        for (double p : ps) {
            for (std::uint32_t x : patterns) {
                push({GraphModel::erdos_renyi, n, 0, p, x, 0});
            }
        }
    }
    for (std::uint32_t n : sizes) {
        for (std::uint32_t m : ms) {
            for (double p : ps) {
                for (std::uint32_t x : patterns) {
                    push({GraphModel::watts_strogatz, n, m, p, x, 0});
                }
            }
        }
    }
    return grid;
}

}  // namespace gargaml::synth
