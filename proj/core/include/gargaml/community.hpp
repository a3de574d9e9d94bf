#pragma once

#include <cstdint>
#include <vector>

#include "gargaml/graph.hpp"

namespace gargaml {

struct CommunityPartition {
    std::vector<std::uint32_t> assignment;  // node -> community id, contiguous from 0
    std::uint32_t community_count = 0;
    double modularity = 0.0;
};

// Resolution-weighted modularity of a partition (gamma multiplies the
// expected-edge term). Directed graphs are evaluated on their undirected view.
double modularity(const Graph& g, const std::vector<std::uint32_t>& assignment, double resolution);

// Louvain community detection on the undirected view of g. The node sweep
// order is shuffled from the seed; ties on modularity gain go to the lowest
// community id, so results are deterministic for a fixed seed.
CommunityPartition louvain(const Graph& g, double resolution, std::uint64_t seed);

// Keeps exactly the edges whose endpoints share a community.
Graph prune_inter_community(const Graph& g, const CommunityPartition& p);

}  // namespace gargaml
