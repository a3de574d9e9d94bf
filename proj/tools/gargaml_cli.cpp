// Command-line front end for the GARG-AML pipeline: generate synthetic
// datasets, ingest transaction files, score graphs, train and evaluate the
// tree-based extension, and benchmark scoring runs.

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "gargaml/community.hpp"
#include "gargaml/dataset_io.hpp"
#include "gargaml/eval.hpp"
#include "gargaml/graph.hpp"
#include "gargaml/ingest.hpp"
#include "gargaml/ml.hpp"
#include "gargaml/pipeline.hpp"
#include "gargaml/rng.hpp"
#include "gargaml/scoring.hpp"
#include "gargaml/synthgen.hpp"

namespace fs = std::filesystem;
using namespace gargaml;

namespace {

using ConfigEntries = std::vector<std::pair<std::string, std::string>>;

std::string join(const std::vector<std::string>& v, char sep = ',') {
    std::string out;
    for (const auto& s : v) {
        if (!out.empty()) out += sep;
        out += s;
    }
    return out;
}

std::vector<std::string> split_list(const std::string& s, char sep = ',') {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string tok;
    while (std::getline(ss, tok, sep)) {
        if (!tok.empty()) out.push_back(tok);
    }
    return out;
}

// ---------------------------------------------------------------------------
// generate

struct GenerateOptions {
    std::string out_dir;
    std::string grid;  // "full" emits the whole evaluation grid
    std::string model = "ba";
    std::uint32_t nodes = 100;
    std::uint32_t m = 1;
    double p = 0.0;
    std::uint32_t patterns = 3;
    std::uint64_t seed = 42;
};

int cmd_generate(const GenerateOptions& opt) {
    fs::create_directories(opt.out_dir);
    if (!opt.grid.empty() && opt.grid != "full") {
        throw std::invalid_argument("--grid only supports 'full'");
    }
    std::vector<synth::GenSpec> specs;
    if (opt.grid == "full") {
        specs = synth::full_grid(opt.seed);
    } else {
        const auto model = synth::parse_model(opt.model);
        if (!model) throw std::invalid_argument("unknown model '" + opt.model + "'");
        synth::GenSpec spec{*model, opt.nodes, opt.m, opt.p, opt.patterns, opt.seed};
        spec.validate();
        specs.push_back(spec);
    }

    for (const auto& spec : specs) {
        const auto ds = synth::generate_dataset(spec);
        io::write_dataset(fs::path(opt.out_dir) / spec.name(), ds);
        std::cout << spec.name() << ": nodes=" << ds.graph.node_count()
                  << " edges=" << ds.graph.edge_count() << " labelled=" << ds.labelled_count()
                  << " (" << ds.label_rate() * 100.0 << "%)\n";
    }
    std::cout << "datasets written: " << specs.size() << " -> " << opt.out_dir << "\n";

    io::write_run_config(fs::path(opt.out_dir) / "run_config.json",
                         {{"command", "generate"},
                          {"out", opt.out_dir},
                          {"grid", opt.grid.empty() ? "single" : opt.grid},
                          {"model", opt.model},
                          {"nodes", std::to_string(opt.nodes)},
                          {"m", std::to_string(opt.m)},
                          {"p", std::to_string(opt.p)},
                          {"patterns", std::to_string(opt.patterns)},
                          {"seed", std::to_string(opt.seed)}});
    return 0;
}

// ---------------------------------------------------------------------------
// score

struct ScoreOptions {
    std::string input;
    std::string out = "scores.csv";
    std::string variant = "undirected";
    double resolution = 10.0;
    unsigned workers = 0;
    std::uint64_t seed = 42;
};

ScoreVariant parse_variant(const std::string& s) {
    if (s == "undirected") return ScoreVariant::undirected;
    if (s == "directed") return ScoreVariant::directed;
    throw std::invalid_argument("variant must be 'undirected' or 'directed'");
}

int cmd_score(const ScoreOptions& opt) {
    const Graph g = io::read_edge_list(opt.input, /*directed=*/true);
    if (g.node_count() == 0) {
        std::cerr << "warning: " << opt.input << " holds no edges; writing empty scores\n";
    }
    PipelineConfig cfg{parse_variant(opt.variant), opt.resolution, opt.workers, opt.seed};
    const PipelineResult result = run_scoring_pipeline(g, cfg);
    io::write_scores(opt.out, result.scores);

    std::cout << "nodes=" << g.node_count() << " edges=" << g.edge_count()
              << " communities=" << result.partition.community_count
              << " pruned_edges=" << result.pruned.edge_count() << "\n";
    std::cout << "louvain_seconds=" << result.louvain_seconds
              << " scoring_seconds=" << result.scoring_seconds << "\n";

    const fs::path out_path(opt.out);
    io::write_run_config(out_path.parent_path() / (out_path.stem().string() + ".run_config.json"),
                         {{"command", "score"},
                          {"input", opt.input},
                          {"out", opt.out},
                          {"variant", opt.variant},
                          {"resolution", std::to_string(opt.resolution)},
                          {"workers", std::to_string(opt.workers)},
                          {"seed", std::to_string(opt.seed)}});
    return 0;
}

// ---------------------------------------------------------------------------
// train-eval

struct TrainEvalOptions {
    std::vector<std::string> datasets;
    std::string datasets_root;
    std::string out_dir = "eval_out";
    std::vector<std::string> methods{"undirected", "directed", "tree_undirected",
                                     "boost_undirected", "tree_directed", "boost_directed"};
    std::string label_source = "laundering";  // or separate | new_mules | existing_mules
    std::optional<double> cutoff;             // propensity datasets
    double resolution = 10.0;
    double train_fraction = 0.7;
    double threshold = 0.5;
    unsigned workers = 0;
    std::uint64_t seed = 42;
};

bool method_needs_variant(const std::string& method, ScoreVariant v) {
    const bool directed = method.ends_with("directed") && !method.ends_with("undirected");
    return (v == ScoreVariant::directed) == directed;
}

std::vector<std::uint8_t> select_labels(const io::LoadedDataset& ds, const std::string& source) {
    if (source == "laundering") return ds.labels;
    const auto tag = synth::parse_pattern_tag(source);
    if (!tag) throw std::invalid_argument("unknown label source '" + source + "'");
    std::vector<std::uint8_t> out(ds.tags.size(), 0);
    for (std::size_t i = 0; i < ds.tags.size(); ++i) out[i] = ds.tags[i] == *tag ? 1 : 0;
    return out;
}

int cmd_train_eval(const TrainEvalOptions& opt) {
    std::vector<fs::path> dataset_dirs;
    for (const auto& d : opt.datasets) dataset_dirs.emplace_back(d);
    if (!opt.datasets_root.empty()) {
        std::vector<fs::path> found;
        for (const auto& entry : fs::directory_iterator(opt.datasets_root)) {
            if (entry.is_directory() && fs::exists(entry.path() / "edges.csv")) {
                found.push_back(entry.path());
            }
        }
        std::sort(found.begin(), found.end());
        dataset_dirs.insert(dataset_dirs.end(), found.begin(), found.end());
    }
    if (dataset_dirs.empty()) throw std::invalid_argument("no datasets given");
    fs::create_directories(opt.out_dir);

    std::vector<io::MetricRow> metric_rows;
    std::map<std::string, std::map<std::string, eval::MetricSet>> by_dataset;
    bool any_error = false;

    for (const auto& dir : dataset_dirs) {
        const std::string name = dir.filename().string();
        try {
            io::LoadedDataset ds;
            if (fs::exists(dir / "labels.csv")) {
                ds = io::read_dataset(dir);
            } else if (fs::exists(dir / "labels_propensity.csv")) {
                if (!opt.cutoff) {
                    throw std::invalid_argument("dataset " + name +
                                                " carries propensity labels; pass --cutoff");
                }
                ds.graph = io::read_edge_list(dir / "edges.csv", true);
                ds.name = name;
                // node_id,propensity,... -> binary at the requested cut-off
                std::ifstream in(dir / "labels_propensity.csv");
                if (!in) throw std::runtime_error("cannot open labels_propensity.csv");
                std::string line;
                std::getline(in, line);
                ds.labels.assign(ds.graph.node_count(), 0);
                ds.tags.assign(ds.graph.node_count(), synth::PatternTag::none);
                while (std::getline(in, line)) {
                    if (line.empty()) continue;
                    const auto c1 = line.find(',');
                    const auto c2 = line.find(',', c1 + 1);
                    const auto id = static_cast<std::size_t>(std::stoul(line.substr(0, c1)));
                    const double prop = std::stod(line.substr(c1 + 1, c2 - c1 - 1));
                    if (id < ds.labels.size()) ds.labels[id] = prop > *opt.cutoff ? 1 : 0;
                }
            } else {
                throw std::runtime_error("no labels.csv or labels_propensity.csv in " + name);
            }

            const auto labels = select_labels(ds, opt.label_source);

            // Score once per variant actually requested.
            std::map<ScoreVariant, std::pair<Graph, std::vector<double>>> scored;
            for (const ScoreVariant variant : {ScoreVariant::undirected, ScoreVariant::directed}) {
                const bool wanted = std::any_of(opt.methods.begin(), opt.methods.end(),
                                                [&](const std::string& m) {
                                                    return method_needs_variant(m, variant);
                                                });
                if (!wanted) continue;
                PipelineConfig cfg{variant, opt.resolution, opt.workers,
                                   Rng::derive(opt.seed, name)};
                PipelineResult res = run_scoring_pipeline(ds.graph, cfg);
                std::vector<double> s(res.scores.size());
                for (const auto& sc : res.scores) s[sc.node] = sc.score;
                scored.emplace(variant, std::make_pair(std::move(res.pruned), std::move(s)));
            }

            for (const auto& method : opt.methods) {
                const ScoreVariant variant = method_needs_variant(method, ScoreVariant::directed)
                                                 ? ScoreVariant::directed
                                                 : ScoreVariant::undirected;
                const auto& [pruned, scores] = scored.at(variant);
                const auto rows = ml::build_features(pruned, scores, labels);

                io::MetricRow row;
                row.dataset = name;
                row.method = method;
                try {
                    auto [train, test] =
                        ml::stratified_split(rows, opt.train_fraction, Rng::derive(opt.seed, name));
                    std::vector<double> probs;
                    if (method.starts_with("tree")) {
                        probs = ml::predict(ml::train_decision_tree(train), test);
                    } else if (method.starts_with("boost")) {
                        probs = ml::predict(ml::train_gradient_boost(train), test);
                    } else {
                        probs.reserve(test.size());
                        for (const auto& r : test) probs.push_back(r.x[0]);  // raw score
                    }
                    std::vector<std::uint8_t> test_labels(test.size());
                    for (std::size_t i = 0; i < test.size(); ++i) test_labels[i] = test[i].label;
                    row.metrics = eval::compute_metrics(probs, test_labels, opt.threshold);
                    row.test_rows = test.size();
                    row.test_positives = static_cast<std::size_t>(
                        std::count(test_labels.begin(), test_labels.end(), std::uint8_t{1}));
                    row.status = row.metrics.auc_roc ? "ok" : "undefined_metrics";
                } catch (const std::invalid_argument& e) {
                    row.status = std::string("degenerate: ") + e.what();
                }
                by_dataset[name][method] = row.metrics;
                metric_rows.push_back(std::move(row));
            }
            std::cout << name << ": ok\n";
        } catch (const std::exception& e) {
            std::cout << name << ": error: " << e.what() << "\n";
            any_error = true;
        }
    }

    io::write_metrics_csv(fs::path(opt.out_dir) / "metrics.csv", metric_rows);

    // Rank aggregation over complete tables; failed entries count as 0.
    if (opt.methods.size() >= 2 && by_dataset.size() >= 2) {
        for (const char* which : {"auc_roc", "auc_pr"}) {
            std::vector<std::vector<double>> table;
            for (const auto& [ds_name, per_method] : by_dataset) {
                std::vector<double> row;
                for (const auto& method : opt.methods) {
                    const auto it = per_method.find(method);
                    double v = 0.0;
                    if (it != per_method.end()) {
                        const auto& m = it->second;
                        const auto& auc =
                            std::string(which) == "auc_roc" ? m.auc_roc : m.auc_pr;
                        v = auc.value_or(0.0);
                    }
                    row.push_back(v);
                }
                table.push_back(std::move(row));
            }
            const auto report = eval::rank_methods(opt.methods, table);
            io::write_rank_report(fs::path(opt.out_dir) / ("rank_" + std::string(which) + ".json"),
                                  report);
        }
    }

    io::write_run_config(fs::path(opt.out_dir) / "run_config.json",
                         {{"command", "train-eval"},
                          {"datasets", join(opt.datasets) +
                                           (opt.datasets_root.empty() ? "" : "+" + opt.datasets_root)},
                          {"methods", join(opt.methods)},
                          {"label_source", opt.label_source},
                          {"cutoff", opt.cutoff ? std::to_string(*opt.cutoff) : "none"},
                          {"resolution", std::to_string(opt.resolution)},
                          {"train_fraction", std::to_string(opt.train_fraction)},
                          {"threshold", std::to_string(opt.threshold)},
                          {"workers", std::to_string(opt.workers)},
                          {"seed", std::to_string(opt.seed)}});
    return any_error ? 1 : 0;
}

// ---------------------------------------------------------------------------
// benchmark

struct BenchmarkOptions {
    std::vector<std::string> inputs;
    std::string out = "timings.csv";
    std::vector<std::string> variants{"undirected", "directed"};
    std::string workers_list = "0";
    double budget = 0.0;
    double resolution = 10.0;
    std::uint64_t seed = 42;
};

int cmd_benchmark(const BenchmarkOptions& opt) {
    std::vector<eval::TimingRecord> records;
    for (const auto& input : opt.inputs) {
        const Graph g = io::read_edge_list(input, /*directed=*/true);
        const std::string dataset = fs::path(input).stem().string();
        for (const auto& variant_name : opt.variants) {
            const ScoreVariant variant = parse_variant(variant_name);
            for (const auto& w : split_list(opt.workers_list)) {
                const auto workers = static_cast<unsigned>(std::stoul(w));
                PipelineConfig cfg{variant, opt.resolution, workers, opt.seed};
                auto rec = eval::benchmark(
                    variant_name + "/workers=" + w, dataset, opt.budget,
                    [&](std::optional<std::chrono::steady_clock::time_point> deadline) {
                        return run_scoring_pipeline(g, cfg, deadline).has_value();
                    });
                std::cout << rec.method << " on " << rec.dataset << ": "
                          << eval::to_string(rec.status) << " " << rec.wall_clock_seconds
                          << "s\n";
                records.push_back(std::move(rec));
            }
        }
    }
    io::write_timings_csv(opt.out, records);

    const fs::path out_path(opt.out);
    io::write_run_config(out_path.parent_path() / (out_path.stem().string() + ".run_config.json"),
                         {{"command", "benchmark"},
                          {"inputs", join(opt.inputs)},
                          {"variants", join(opt.variants)},
                          {"workers", opt.workers_list},
                          {"budget", std::to_string(opt.budget)},
                          {"resolution", std::to_string(opt.resolution)},
                          {"seed", std::to_string(opt.seed)}});
    const bool any_failed = std::any_of(records.begin(), records.end(), [](const auto& r) {
        return r.status != eval::RunStatus::ok;
    });
    return any_failed ? 1 : 0;
}

// ---------------------------------------------------------------------------
// ingest

struct IngestOptions {
    std::string input;
    std::string out_dir = "ingested";
    std::string delimiter = ",";
    int col_src = 0;
    int col_dst = 1;
    int col_label = 2;
    int col_pattern = -1;
    std::vector<double> cutoffs{0.1, 0.2, 0.3, 0.5, 0.9};
};

int cmd_ingest(const IngestOptions& opt) {
    if (opt.delimiter.size() != 1) throw std::invalid_argument("delimiter must be one character");
    ingest::ColumnMap columns{opt.col_src, opt.col_dst, opt.col_label, opt.col_pattern};
    const auto loaded = ingest::load_transactions(opt.input, columns, opt.delimiter[0]);
    for (const auto& reason : loaded.skip_reasons) std::cerr << "skipped " << reason << "\n";
    if (loaded.rows_skipped > loaded.skip_reasons.size()) {
        std::cerr << "… " << loaded.rows_skipped << " rows skipped in total\n";
    }

    const std::size_t n = loaded.ids.size();
    const Graph g = ingest::build_transaction_graph(loaded.records, n);
    const auto labels = ingest::aggregate_labels(loaded.records, n, opt.cutoffs);

    fs::create_directories(opt.out_dir);
    const fs::path dir(opt.out_dir);
    io::write_edge_list(dir / "edges.csv", g);
    io::write_id_table(dir / "accounts.csv", loaded.ids);
    io::write_node_labels(dir / "labels_propensity.csv", labels);

    std::cout << "accounts=" << n << " transactions=" << loaded.records.size()
              << " skipped=" << loaded.rows_skipped << " edges=" << g.edge_count() << "\n";
    for (double c : opt.cutoffs) {
        std::cout << "positive rate @" << c << ": " << labels.positive_rate(c) * 100.0 << "%\n";
    }

    std::ostringstream cutoffs_s;
    for (double c : opt.cutoffs) cutoffs_s << c << ' ';
    io::write_run_config(dir / "run_config.json", {{"command", "ingest"},
                                                   {"input", opt.input},
                                                   {"out", opt.out_dir},
                                                   {"delimiter", opt.delimiter},
                                                   {"col_src", std::to_string(opt.col_src)},
                                                   {"col_dst", std::to_string(opt.col_dst)},
                                                   {"col_label", std::to_string(opt.col_label)},
                                                   {"col_pattern", std::to_string(opt.col_pattern)},
                                                   {"cutoffs", cutoffs_s.str()}});
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"GARG-AML smurfing-risk scores for transaction graphs"};
    app.require_subcommand(1);
    app.set_config("--config");

    GenerateOptions gen;
    auto* generate = app.add_subcommand("generate", "Generate synthetic datasets");
    generate->add_option("--out", gen.out_dir, "Output directory")->required();
    generate->add_option("--grid", gen.grid, "'full' emits the 66-spec evaluation grid");
    generate->add_option("--model", gen.model, "ba | er | ws");
    generate->add_option("--nodes", gen.nodes, "Base node count");
    generate->add_option("--m", gen.m, "Edge parameter (ba, ws)");
    generate->add_option("--p", gen.p, "Edge/rewiring probability (er, ws)");
    generate->add_option("--patterns", gen.patterns, "Injections per pattern mode");
    generate->add_option("--seed", gen.seed, "Random seed");

    ScoreOptions sco;
    auto* score = app.add_subcommand("score", "Compute GARG-AML scores for an edge list");
    score->add_option("--input", sco.input, "Edge list (src,dst per line)")->required();
    score->add_option("--out", sco.out, "Score file to write");
    score->add_option("--variant", sco.variant, "undirected | directed");
    score->add_option("--resolution", sco.resolution, "Louvain resolution");
    score->add_option("--workers", sco.workers, "Worker threads (0 = all cores)")
        ->envname("GARGAML_WORKERS");
    score->add_option("--seed", sco.seed, "Random seed");

    TrainEvalOptions te;
    auto* train_eval = app.add_subcommand("train-eval", "Train tree models and evaluate methods");
    train_eval->add_option("--dataset", te.datasets, "Dataset directory (repeatable)");
    train_eval->add_option("--datasets-root", te.datasets_root,
                           "Directory whose subdirectories are datasets");
    train_eval->add_option("--out", te.out_dir, "Report directory");
    train_eval->add_option("--methods", te.methods,
                           "undirected directed tree_* boost_* (space separated)");
    train_eval->add_option("--label-source", te.label_source,
                           "laundering | separate | new_mules | existing_mules");
    double cutoff_value = -1.0;
    train_eval->add_option("--cutoff", cutoff_value, "Propensity cut-off for ingested datasets");
    train_eval->add_option("--resolution", te.resolution, "Louvain resolution");
    train_eval->add_option("--train-fraction", te.train_fraction, "Stratified train share");
    train_eval->add_option("--threshold", te.threshold, "Classification threshold");
    train_eval->add_option("--workers", te.workers, "Worker threads")->envname("GARGAML_WORKERS");
    train_eval->add_option("--seed", te.seed, "Random seed");

    BenchmarkOptions bench;
    auto* benchmark = app.add_subcommand("benchmark", "Time scoring runs");
    benchmark->add_option("--input", bench.inputs, "Edge list (repeatable)")->required();
    benchmark->add_option("--out", bench.out, "Timing table to write");
    benchmark->add_option("--variants", bench.variants, "undirected directed");
    benchmark->add_option("--workers", bench.workers_list, "Comma list of worker counts")
        ->envname("GARGAML_WORKERS");
    benchmark->add_option("--budget", bench.budget, "Time budget in seconds (0 = unlimited)");
    benchmark->add_option("--resolution", bench.resolution, "Louvain resolution");
    benchmark->add_option("--seed", bench.seed, "Random seed");

    IngestOptions ing;
    auto* ingest_cmd = app.add_subcommand("ingest", "Load a delimited transaction file");
    ingest_cmd->add_option("--input", ing.input, "Transaction file")->required();
    ingest_cmd->add_option("--out", ing.out_dir, "Output directory");
    ingest_cmd->add_option("--delimiter", ing.delimiter, "Field delimiter");
    ingest_cmd->add_option("--col-src", ing.col_src, "Source account column");
    ingest_cmd->add_option("--col-dst", ing.col_dst, "Destination account column");
    ingest_cmd->add_option("--col-label", ing.col_label, "Laundering flag column");
    ingest_cmd->add_option("--col-pattern", ing.col_pattern, "Pattern column (-1 = none)");
    ingest_cmd->add_option("--cutoffs", ing.cutoffs, "Propensity cut-offs");

    CLI11_PARSE(app, argc, argv);

    try {
        if (generate->parsed()) return cmd_generate(gen);
        if (score->parsed()) return cmd_score(sco);
        if (train_eval->parsed()) {
            if (cutoff_value >= 0.0) te.cutoff = cutoff_value;
            return cmd_train_eval(te);
        }
        if (benchmark->parsed()) return cmd_benchmark(bench);
        if (ingest_cmd->parsed()) return cmd_ingest(ing);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
