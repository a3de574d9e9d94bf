#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "gargaml/graph.hpp"

namespace gargaml::synth {

enum class GraphModel { barabasi_albert, erdos_renyi, watts_strogatz };

const char* to_string(GraphModel m);
std::optional<GraphModel> parse_model(std::string_view s);

struct GenSpec {
    GraphModel model = GraphModel::barabasi_albert;
    std::uint32_t n_nodes = 0;
    std::uint32_t m_edges = 0;      // BA: attachments per new node; WS: half the ring degree
    double p_edge = 0.0;            // ER: edge probability; WS: rewiring probability
    std::uint32_t n_patterns = 3;   // injections of each pattern mode
    std::uint64_t seed = 0;

    void validate() const;          // throws std::invalid_argument
    std::string name() const;       // e.g. "ws_n100_m2_p0.01_x5"
};

enum class PatternMode { separate, new_mules, existing_mules };
enum class PatternTag : std::uint8_t { none = 0, separate, new_mules, existing_mules };

const char* to_string(PatternMode m);
const char* to_string(PatternTag t);
std::optional<PatternTag> parse_pattern_tag(std::string_view s);

struct SyntheticDataset {
    Graph graph;  // directed
    std::vector<std::uint8_t> labels;  // per node
    std::vector<PatternTag> tags;      // per node
    GenSpec spec;

    std::size_t labelled_count() const;
    double label_rate() const;
};

// Base topology with every generated undirected edge oriented uniformly at
// random. Node count equals spec.n_nodes.
Graph generate_base(const GenSpec& spec);

// One scatter-gather injection: sender -> smurf_i -> receiver for each smurf.
// Returns the grown graph and the participant node set (sender, smurfs,
// receiver). smurf_count must be in [2, 10].
std::pair<Graph, std::vector<NodeId>> inject_pattern(const Graph& g, PatternMode mode,
                                                     std::uint32_t smurf_count,
                                                     std::uint64_t seed);

// Base graph plus n_patterns injections of each of the three modes, smurf
// counts drawn uniformly in [2, 10]. Identical spec gives identical output.
SyntheticDataset generate_dataset(const GenSpec& spec);

// The full 66-spec evaluation grid (18 BA + 12 ER + 36 WS); per-dataset seeds
// derive from base_seed and the spec name.
std::vector<GenSpec> full_grid(std::uint64_t base_seed);

}  // namespace gargaml::synth
