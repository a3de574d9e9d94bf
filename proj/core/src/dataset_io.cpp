#include "gargaml/dataset_io.hpp"

#include <charconv>
#include <cinttypes>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace gargaml::io {

namespace {

using nlohmann::json;

std::ofstream open_out(const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    return out;
}

std::ifstream open_in(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path.string());
    return in;
}

[[noreturn]] void parse_fail(const std::filesystem::path& path, std::size_t line_no,
                             const std::string& what) {
    throw std::runtime_error(path.string() + ":" + std::to_string(line_no) + ": " + what);
}

// %.17g round-trips doubles exactly and keeps files byte-stable across runs.
std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

// Short form for labels that are human-entered values like cut-offs.
std::string fmt_short(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%g", v);
    return buf;
}

}  // namespace

void write_edge_list(const std::filesystem::path& path, const Graph& g) {
    auto out = open_out(path);
    std::string line;
    for (const Edge& e : g.edges()) {
        line.clear();
        line += std::to_string(e.src);
        line += ',';
        line += std::to_string(e.dst);
        line += '\n';
        out << line;
    }
}

Graph read_edge_list(const std::filesystem::path& path, bool directed) {
    auto in = open_in(path);
    std::vector<Edge> edges;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        const auto comma = line.find(',');
        if (comma == std::string::npos) parse_fail(path, line_no, "expected 'src,dst'");
        Edge e;
        auto r1 = std::from_chars(line.data(), line.data() + comma, e.src);
        auto r2 = std::from_chars(line.data() + comma + 1, line.data() + line.size(), e.dst);
        if (r1.ec != std::errc{} || r2.ec != std::errc{} || r1.ptr != line.data() + comma ||
            r2.ptr != line.data() + line.size()) {
            parse_fail(path, line_no, "malformed node id in '" + line + "'");
        }
        edges.push_back(e);
    }
    return Graph::from_edges(std::move(edges), directed);
}

void write_dataset(const std::filesystem::path& dir, const synth::SyntheticDataset& ds) {
    std::filesystem::create_directories(dir);
    write_edge_list(dir / "edges.csv", ds.graph);

    auto labels = open_out(dir / "labels.csv");
    labels << "node_id,label,pattern_tag\n";
    for (NodeId v = 0; v < ds.graph.node_count(); ++v) {
        labels << v << ',' << int(ds.labels[v]) << ',' << synth::to_string(ds.tags[v]) << '\n';
    }

    json meta;
    meta["model"] = synth::to_string(ds.spec.model);
    meta["n_nodes"] = ds.spec.n_nodes;
    meta["m_edges"] = ds.spec.m_edges;
    meta["p_edge"] = ds.spec.p_edge;
    meta["n_patterns"] = ds.spec.n_patterns;
    meta["seed"] = ds.spec.seed;
    meta["name"] = ds.spec.name();
    meta["nodes"] = ds.graph.node_count();
    meta["edges"] = ds.graph.edge_count();
    meta["labelled"] = ds.labelled_count();
    meta["label_rate"] = ds.label_rate();
    open_out(dir / "meta.json") << meta.dump(2) << '\n';
}

LoadedDataset read_dataset(const std::filesystem::path& dir) {
    LoadedDataset out;
    out.graph = read_edge_list(dir / "edges.csv", /*directed=*/true);
    out.name = dir.filename().string();

    const auto labels_path = dir / "labels.csv";
    auto in = open_in(labels_path);
    std::string line;
    std::size_t line_no = 0;
    std::getline(in, line);  // header
    ++line_no;
    std::size_t max_node = 0;
    std::vector<std::tuple<NodeId, std::uint8_t, synth::PatternTag>> rows;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        std::istringstream ss(line);
        std::string id_s, label_s, tag_s;
        if (!std::getline(ss, id_s, ',') || !std::getline(ss, label_s, ',') ||
            !std::getline(ss, tag_s)) {
            parse_fail(labels_path, line_no, "expected 'node_id,label,pattern_tag'");
        }
        const auto tag = synth::parse_pattern_tag(tag_s);
        if (!tag) parse_fail(labels_path, line_no, "unknown pattern tag '" + tag_s + "'");
        const auto id = static_cast<NodeId>(std::stoul(id_s));
        rows.emplace_back(id, label_s == "1" ? 1 : 0, *tag);
        max_node = std::max<std::size_t>(max_node, id + 1);
    }
    const std::size_t n = std::max(out.graph.node_count(), max_node);
    out.labels.assign(n, 0);
    out.tags.assign(n, synth::PatternTag::none);
    for (const auto& [id, label, tag] : rows) {
        out.labels[id] = label;
        out.tags[id] = tag;
    }
    return out;
}

void write_scores(const std::filesystem::path& path, std::span<const GargAmlScore> scores) {
    auto out = open_out(path);
    const bool directed =
        !scores.empty() && scores.front().variant == ScoreVariant::directed;
    if (directed) {
        out << "node_id,variant,score,s00,s01,s02,s10,s11,s12,s20,s21,s22,"
               "f00,f01,f02,f10,f11,f12,f20,f21,f22,l,n,m\n";
    } else {
        out << "node_id,variant,score,s1,s2,s3,l1,l2,l3,n,m\n";
    }
    std::string line;
    for (const GargAmlScore& s : scores) {
        line.clear();
        line += std::to_string(s.node);
        line += ',';
        line += to_string(s.variant);
        line += ',';
        line += fmt(s.score);
        if (s.variant == ScoreVariant::undirected) {
            const auto& b = s.undirected_blocks();
            for (double d : {b.s1, b.s2, b.s3}) {
                line += ',';
                line += fmt(d);
            }
            for (std::uint64_t v : {b.l1, b.l2, b.l3, b.n, b.m}) {
                line += ',';
                line += std::to_string(v);
            }
        } else {
            const auto& b = s.directed_blocks();
            for (int i = 0; i < 3; ++i) {
                for (int j = 0; j < 3; ++j) {
                    line += ',';
                    line += fmt(b.density[i][j]);
                }
            }
            for (int i = 0; i < 3; ++i) {
                for (int j = 0; j < 3; ++j) {
                    line += ',';
                    line += std::to_string(b.free_entries[i][j]);
                }
            }
            for (std::uint64_t v : {b.l, b.n, b.m}) {
                line += ',';
                line += std::to_string(v);
            }
        }
        line += '\n';
        out << line;
    }
}

std::vector<GargAmlScore> read_scores(const std::filesystem::path& path) {
    auto in = open_in(path);
    std::vector<GargAmlScore> out;
    std::string line;
    std::size_t line_no = 0;
    std::getline(in, line);  // header
    ++line_no;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        std::vector<std::string> f;
        std::stringstream ss(line);
        std::string tok;
        while (std::getline(ss, tok, ',')) f.push_back(tok);
        if (f.size() < 3) parse_fail(path, line_no, "too few columns");
        GargAmlScore s;
        s.node = static_cast<NodeId>(std::stoul(f[0]));
        s.score = std::stod(f[2]);
        if (f[1] == "undirected") {
            if (f.size() != 11) parse_fail(path, line_no, "expected 11 columns");
            s.variant = ScoreVariant::undirected;
            UndirectedBlocks b;
            b.s1 = std::stod(f[3]);
            b.s2 = std::stod(f[4]);
            b.s3 = std::stod(f[5]);
            b.l1 = std::stoull(f[6]);
            b.l2 = std::stoull(f[7]);
            b.l3 = std::stoull(f[8]);
            b.n = std::stoull(f[9]);
            b.m = std::stoull(f[10]);
            s.blocks = b;
        } else if (f[1] == "directed") {
            if (f.size() != 24) parse_fail(path, line_no, "expected 24 columns");
            s.variant = ScoreVariant::directed;
            DirectedBlocks b;
            for (int i = 0; i < 9; ++i) b.density[i / 3][i % 3] = std::stod(f[3 + i]);
            for (int i = 0; i < 9; ++i) b.free_entries[i / 3][i % 3] = std::stoull(f[12 + i]);
            b.l = std::stoull(f[21]);
            b.n = std::stoull(f[22]);
            b.m = std::stoull(f[23]);
            s.blocks = b;
        } else {
            parse_fail(path, line_no, "unknown variant '" + f[1] + "'");
        }
        out.push_back(s);
    }
    return out;
}

void write_id_table(const std::filesystem::path& path, const ingest::IdTable& ids) {
    auto out = open_out(path);
    out << "node_id,account\n";
    for (std::size_t i = 0; i < ids.names.size(); ++i) {
        out << i << ',' << ids.names[i] << '\n';
    }
}

void write_node_labels(const std::filesystem::path& path, const ingest::NodeLabelSet& labels) {
    auto out = open_out(path);
    out << "node_id,propensity";
    for (double c : labels.cutoffs) out << ",pos_" << fmt_short(c);
    out << '\n';
    for (std::size_t v = 0; v < labels.propensity.size(); ++v) {
        out << v << ',' << fmt(labels.propensity[v]);
        for (double c : labels.cutoffs) out << ',' << (labels.propensity[v] > c ? 1 : 0);
        out << '\n';
    }
}

void write_metrics_csv(const std::filesystem::path& path, std::span<const MetricRow> rows) {
    auto out = open_out(path);
    out << "dataset,method,precision,f1,auc_roc,auc_pr,threshold,test_rows,test_positives,status\n";
    for (const MetricRow& r : rows) {
        out << r.dataset << ',' << r.method << ',' << fmt(r.metrics.precision) << ','
            << fmt(r.metrics.f1) << ','
            << (r.metrics.auc_roc ? fmt(*r.metrics.auc_roc) : std::string("undefined")) << ','
            << (r.metrics.auc_pr ? fmt(*r.metrics.auc_pr) : std::string("undefined")) << ','
            << fmt(r.metrics.threshold) << ',' << r.test_rows << ',' << r.test_positives << ','
            << r.status << '\n';
    }
}

void write_rank_report(const std::filesystem::path& path, const eval::RankReport& report) {
    json j;
    j["k"] = report.k;
    j["n_datasets"] = report.n_datasets;
    j["friedman_q"] = report.friedman_q;
    j["q_degrees_freedom"] = report.q_degrees_freedom;
    j["nemenyi_cd"] = report.nemenyi_cd;
    json ranks = json::object();
    for (std::size_t i = 0; i < report.methods.size(); ++i) {
        ranks[report.methods[i]] = report.avg_rank[i];
    }
    j["average_ranks"] = ranks;
    open_out(path) << j.dump(2) << '\n';
}

void write_timings_csv(const std::filesystem::path& path,
                       std::span<const eval::TimingRecord> rows) {
    auto out = open_out(path);
    out << "method,dataset,wall_clock_seconds,peak_memory_bytes,peak_memory_available,status,"
           "budget_seconds\n";
    for (const auto& r : rows) {
        out << r.method << ',' << r.dataset << ',' << fmt(r.wall_clock_seconds) << ','
            << r.peak_memory_bytes << ',' << (r.peak_memory_available ? 1 : 0) << ','
            << to_string(r.status) << ',' << fmt(r.budget_seconds) << '\n';
    }
}

void write_run_config(const std::filesystem::path& path,
                      const std::vector<std::pair<std::string, std::string>>& entries) {
    json j = json::object();
    for (const auto& [key, value] : entries) j[key] = value;
    open_out(path) << j.dump(2) << '\n';
}

}  // namespace gargaml::io
