#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "gargaml/graph.hpp"

namespace gargaml::ingest {

// Laundering pattern names used by the AMLSim-style datasets.
enum class Pattern : std::uint8_t {
    fan_out,
    fan_in,
    gather_scatter,
    scatter_gather,
    cycle,
    random,
    bipartite,
    stack,
    not_classified,
};
inline constexpr std::size_t kPatternCount = 9;

const char* to_string(Pattern p);
std::optional<Pattern> parse_pattern(std::string_view s);

struct TransactionRecord {
    NodeId src = 0;
    NodeId dst = 0;
    bool is_laundering = false;
    std::int8_t pattern = -1;  // Pattern index; -1 when absent (never set on clean rows)
};

// External account strings to dense node ids, insertion-ordered.
struct IdTable {
    std::unordered_map<std::string, NodeId> to_id;
    std::vector<std::string> names;

    NodeId intern(std::string_view account);
    std::size_t size() const { return names.size(); }
};

struct ColumnMap {
    int src = 0;
    int dst = 1;
    int is_laundering = 2;
    int pattern = -1;  // optional
};

struct LoadResult {
    std::vector<TransactionRecord> records;
    IdTable ids;
    std::size_t rows_read = 0;
    std::size_t rows_skipped = 0;
    std::vector<std::string> skip_reasons;  // "line 17: ..." for the first few
};

// Delimited text loader. Rows missing a mapped column or with an unparsable
// flag are skipped and counted with their line number; a header row is
// detected by an unparsable laundering flag on line 1.
LoadResult load_transactions(const std::string& path, const ColumnMap& columns, char delimiter);

struct NodeLabelSet {
    std::vector<double> cutoffs;
    std::vector<std::uint64_t> tx_count;  // sent + received, duplicates counted
    std::vector<double> propensity;       // laundering share per node
    std::array<std::vector<double>, kPatternCount> pattern_propensity;

    // Strict inequality: positive iff propensity exceeds the cut-off.
    bool positive(NodeId v, double cutoff) const { return propensity[v] > cutoff; }
    bool pattern_positive(Pattern p, NodeId v, double cutoff) const {
        return pattern_propensity[static_cast<std::size_t>(p)][v] > cutoff;
    }
    std::vector<std::uint8_t> binary(double cutoff) const;
    std::vector<std::uint8_t> pattern_binary(Pattern p, double cutoff) const;
    double positive_rate(double cutoff) const;
    double pattern_positive_rate(Pattern p, double cutoff) const;
};

NodeLabelSet aggregate_labels(std::span<const TransactionRecord> records, std::size_t node_count,
                              std::vector<double> cutoffs);

// 0/1 adjacency from the transaction stream; parallel transfers collapse.
Graph build_transaction_graph(std::span<const TransactionRecord> records, std::size_t node_count);

}  // namespace gargaml::ingest
