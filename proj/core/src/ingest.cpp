#include "gargaml/ingest.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <stdexcept>

namespace gargaml::ingest {

const char* to_string(Pattern p) {
    switch (p) {
        case Pattern::fan_out: return "fan-out";
        case Pattern::fan_in: return "fan-in";
        case Pattern::gather_scatter: return "gather-scatter";
        case Pattern::scatter_gather: return "scatter-gather";
        case Pattern::cycle: return "cycle";
        case Pattern::random: return "random";
        case Pattern::bipartite: return "bipartite";
        case Pattern::stack: return "stack";
        case Pattern::not_classified: return "not-classified";
    }
    return "?";
}

std::optional<Pattern> parse_pattern(std::string_view s) {
    std::string norm;
    norm.reserve(s.size());
    for (char c : s) {
        if (c == '_' || c == ' ') c = '-';
        norm.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
    }
    if (norm == "fan-out") return Pattern::fan_out;
    if (norm == "fan-in") return Pattern::fan_in;
    if (norm == "gather-scatter") return Pattern::gather_scatter;
    if (norm == "scatter-gather") return Pattern::scatter_gather;
    if (norm == "cycle" || norm == "simple-cycle") return Pattern::cycle;
    if (norm == "random") return Pattern::random;
    if (norm == "bipartite") return Pattern::bipartite;
    if (norm == "stack") return Pattern::stack;
    if (norm == "not-classified" || norm == "unclassified") return Pattern::not_classified;
    return std::nullopt;
}

NodeId IdTable::intern(std::string_view account) {
    auto it = to_id.find(std::string(account));
    if (it != to_id.end()) return it->second;
    const auto id = static_cast<NodeId>(names.size());
    names.emplace_back(account);
    to_id.emplace(names.back(), id);
    return id;
}

namespace {

std::optional<bool> parse_bool(std::string_view s) {
    if (s == "1" || s == "true" || s == "True" || s == "TRUE" || s == "yes") return true;
    if (s == "0" || s == "false" || s == "False" || s == "FALSE" || s == "no") return false;
    return std::nullopt;
}

// Splits without copying; trailing empty fields preserved.
void split_line(const std::string& line, char delimiter, std::vector<std::string_view>& out) {
    out.clear();
    std::size_t start = 0;
    for (std::size_t i = 0; i <= line.size(); ++i) {
        if (i == line.size() || line[i] == delimiter) {
            out.emplace_back(line.data() + start, i - start);
            start = i + 1;
        }
    }
}

}  // namespace

LoadResult load_transactions(const std::string& path, const ColumnMap& columns, char delimiter) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);

    const int max_col = std::max({columns.src, columns.dst, columns.is_laundering, columns.pattern});
    if (columns.src < 0 || columns.dst < 0 || columns.is_laundering < 0) {
        throw std::invalid_argument("src, dst and is_laundering columns are required");
    }

    LoadResult result;
    std::string line;
    std::vector<std::string_view> fields;
    std::size_t line_no = 0;
    constexpr std::size_t kMaxReportedSkips = 10;

    auto skip = [&](const std::string& reason) {
        ++result.rows_skipped;
        if (result.skip_reasons.size() < kMaxReportedSkips) {
            result.skip_reasons.push_back("line " + std::to_string(line_no) + ": " + reason);
        }
    };

    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        ++result.rows_read;
        split_line(line, delimiter, fields);
        if (static_cast<int>(fields.size()) <= max_col) {
            if (line_no == 1) {
                --result.rows_read;  // header with fewer columns than mapped
                continue;
            }
            skip("missing column (have " + std::to_string(fields.size()) + ")");
            continue;
        }
        const auto flag = parse_bool(fields[static_cast<std::size_t>(columns.is_laundering)]);
        if (!flag) {
            if (line_no == 1) {
                --result.rows_read;  // header row
                continue;
            }
            skip("unparsable laundering flag '" +
                 std::string(fields[static_cast<std::size_t>(columns.is_laundering)]) + "'");
            continue;
        }
        const auto src_field = fields[static_cast<std::size_t>(columns.src)];
        const auto dst_field = fields[static_cast<std::size_t>(columns.dst)];
        if (src_field.empty() || dst_field.empty()) {
            skip("empty account field");
            continue;
        }

        TransactionRecord rec;
        rec.src = result.ids.intern(src_field);
        rec.dst = result.ids.intern(dst_field);
        rec.is_laundering = *flag;
        if (rec.is_laundering && columns.pattern >= 0) {
            const auto pat = parse_pattern(fields[static_cast<std::size_t>(columns.pattern)]);
            rec.pattern = pat ? static_cast<std::int8_t>(*pat)
                              : static_cast<std::int8_t>(Pattern::not_classified);
        }
        result.records.push_back(rec);
    }
    return result;
}

std::vector<std::uint8_t> NodeLabelSet::binary(double cutoff) const {
    std::vector<std::uint8_t> out(propensity.size(), 0);
    for (std::size_t v = 0; v < propensity.size(); ++v) out[v] = propensity[v] > cutoff ? 1 : 0;
    return out;
}

std::vector<std::uint8_t> NodeLabelSet::pattern_binary(Pattern p, double cutoff) const {
    const auto& prop = pattern_propensity[static_cast<std::size_t>(p)];
    std::vector<std::uint8_t> out(prop.size(), 0);
    for (std::size_t v = 0; v < prop.size(); ++v) out[v] = prop[v] > cutoff ? 1 : 0;
    return out;
}

double NodeLabelSet::positive_rate(double cutoff) const {
    if (propensity.empty()) return 0.0;
    std::size_t pos = 0;
    for (double p : propensity) pos += p > cutoff ? 1 : 0;
    return static_cast<double>(pos) / static_cast<double>(propensity.size());
}

double NodeLabelSet::pattern_positive_rate(Pattern p, double cutoff) const {
    const auto& prop = pattern_propensity[static_cast<std::size_t>(p)];
    if (prop.empty()) return 0.0;
    std::size_t pos = 0;
    for (double x : prop) pos += x > cutoff ? 1 : 0;
    return static_cast<double>(pos) / static_cast<double>(prop.size());
}

NodeLabelSet aggregate_labels(std::span<const TransactionRecord> records, std::size_t node_count,
                              std::vector<double> cutoffs) {
    for (double c : cutoffs) {
        if (c <= 0.0 || c > 1.0) throw std::invalid_argument("cut-offs must lie in (0, 1]");
    }
    NodeLabelSet out;
    out.cutoffs = std::move(cutoffs);
    out.tx_count.assign(node_count, 0);
    std::vector<std::uint64_t> laundering(node_count, 0);
    std::array<std::vector<std::uint64_t>, kPatternCount> per_pattern;
    for (auto& v : per_pattern) v.assign(node_count, 0);

    for (const TransactionRecord& r : records) {
        // Both ends participate in the transaction.
        for (NodeId v : {r.src, r.dst}) {
            ++out.tx_count[v];
            if (r.is_laundering) {
                ++laundering[v];
                if (r.pattern >= 0) ++per_pattern[static_cast<std::size_t>(r.pattern)][v];
            }
        }
    }

    out.propensity.assign(node_count, 0.0);
    for (auto& v : out.pattern_propensity) v.assign(node_count, 0.0);
    for (std::size_t v = 0; v < node_count; ++v) {
        if (out.tx_count[v] == 0) continue;
        const auto total = static_cast<double>(out.tx_count[v]);
        out.propensity[v] = static_cast<double>(laundering[v]) / total;
        for (std::size_t p = 0; p < kPatternCount; ++p) {
            out.pattern_propensity[p][v] = static_cast<double>(per_pattern[p][v]) / total;
        }
    }
    return out;
}

Graph build_transaction_graph(std::span<const TransactionRecord> records, std::size_t node_count) {
    std::vector<Edge> edges;
    edges.reserve(records.size());
    for (const TransactionRecord& r : records) edges.push_back({r.src, r.dst});
    return Graph::from_edges(std::move(edges), /*directed=*/true, node_count);
}

}  // namespace gargaml::ingest
