#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "gargaml/eval.hpp"
#include "gargaml/graph.hpp"
#include "gargaml/ingest.hpp"
#include "gargaml/scoring.hpp"
#include "gargaml/synthgen.hpp"

namespace gargaml::io {

// Edge list: one "src,dst" pair per line, no header. Parse errors carry the
// offending line number. An empty file is an empty graph.
void write_edge_list(const std::filesystem::path& path, const Graph& g);
Graph read_edge_list(const std::filesystem::path& path, bool directed);

// Dataset directory layout: edges.csv + labels.csv (node_id,label,pattern_tag)
// + meta.json echoing the generating spec and summary counts.
void write_dataset(const std::filesystem::path& dir, const synth::SyntheticDataset& ds);

struct LoadedDataset {
    Graph graph;
    std::vector<std::uint8_t> labels;
    std::vector<synth::PatternTag> tags;
    std::string name;
};
LoadedDataset read_dataset(const std::filesystem::path& dir);

// Score table. Column order, fixed:
//   undirected: node_id,variant,score,s1,s2,s3,l1,l2,l3,n,m
//   directed:   node_id,variant,score,s00..s22,f00..f22,l,n,m
void write_scores(const std::filesystem::path& path, std::span<const GargAmlScore> scores);
std::vector<GargAmlScore> read_scores(const std::filesystem::path& path);

// Ingest outputs: account id map and per-cutoff node labels.
void write_id_table(const std::filesystem::path& path, const ingest::IdTable& ids);
void write_node_labels(const std::filesystem::path& path, const ingest::NodeLabelSet& labels);

struct MetricRow {
    std::string dataset;
    std::string method;
    eval::MetricSet metrics;
    std::size_t test_rows = 0;
    std::size_t test_positives = 0;
    std::string status = "ok";
};
void write_metrics_csv(const std::filesystem::path& path, std::span<const MetricRow> rows);
void write_rank_report(const std::filesystem::path& path, const eval::RankReport& report);
void write_timings_csv(const std::filesystem::path& path,
                       std::span<const eval::TimingRecord> rows);

// Resolved run configuration, written next to every command's outputs.
void write_run_config(const std::filesystem::path& path,
                      const std::vector<std::pair<std::string, std::string>>& entries);

}  // namespace gargaml::io
