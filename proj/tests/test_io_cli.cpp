#include <doctest.h>

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "gargaml/dataset_io.hpp"
#include "gargaml/graph.hpp"
#include "gargaml/scoring.hpp"
#include "gargaml/synthgen.hpp"
#include "toy_network.hpp"

using namespace gargaml;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
    const fs::path dir = fs::path(GARGAML_TEST_TMP) / name;
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

int run_cli(const std::string& args, const fs::path& stdout_to = {}) {
    std::string cmd = std::string(GARGAML_CLI_PATH) + " " + args;
    if (!stdout_to.empty()) cmd += " > " + stdout_to.string() + " 2>&1";
    return std::system(cmd.c_str());
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace

TEST_CASE("edge list round trip") {
    const auto dir = scratch("io_edges");
    const Graph g = toy::directed_toy();
    io::write_edge_list(dir / "edges.csv", g);
    const Graph back = io::read_edge_list(dir / "edges.csv", true);
    CHECK(back.edges() == g.edges());
}

TEST_CASE("edge list parse errors carry line numbers") {
    const auto dir = scratch("io_bad");
    std::ofstream(dir / "bad.csv") << "0,1\nnot-an-edge\n";
    try {
        io::read_edge_list(dir / "bad.csv", true);
        FAIL("expected a parse error");
    } catch (const std::runtime_error& e) {
        CHECK(std::string(e.what()).find(":2:") != std::string::npos);
    }
}

TEST_CASE("dataset round trip keeps labels and tags") {
    const auto dir = scratch("io_dataset");
    const auto ds = synth::generate_dataset({synth::GraphModel::watts_strogatz, 50, 2, 0.01, 3, 5});
    io::write_dataset(dir / "ds", ds);
    const auto back = io::read_dataset(dir / "ds");
    CHECK(back.graph.edges() == ds.graph.edges());
    CHECK(back.labels == ds.labels);
    CHECK(back.tags == ds.tags);
}

TEST_CASE("score files round trip for both variants") {
    const auto dir = scratch("io_scores");
    const Graph g = toy::directed_toy();
    for (const auto variant : {ScoreVariant::undirected, ScoreVariant::directed}) {
        const auto scores = score_all(g, variant, 2);
        const auto path = dir / (std::string("scores_") + to_string(variant) + ".csv");
        io::write_scores(path, scores);
        const auto back = io::read_scores(path);
        REQUIRE(back.size() == scores.size());
        for (std::size_t i = 0; i < scores.size(); ++i) {
            CHECK(back[i].node == scores[i].node);
            CHECK(back[i].score == scores[i].score);  // %.17g round trip is exact
            CHECK(back[i].variant == scores[i].variant);
        }
    }
}

TEST_CASE("cli: single dataset generation is deterministic") {
    const auto dir = scratch("cli_gen");
    const std::string spec = "--model ws --nodes 100 --m 2 --p 0.01 --patterns 5 --seed 7";
    CHECK(run_cli("generate --out " + (dir / "a").string() + " " + spec) == 0);
    CHECK(run_cli("generate --out " + (dir / "b").string() + " " + spec) == 0);
    const auto name = "ws_n100_m2_p0.01_x5";
    CHECK(slurp(dir / "a" / name / "edges.csv") == slurp(dir / "b" / name / "edges.csv"));
    CHECK(slurp(dir / "a" / name / "labels.csv") == slurp(dir / "b" / name / "labels.csv"));
    CHECK(fs::exists(dir / "a" / "run_config.json"));
}

TEST_CASE("cli: toy scores reproduce the known ground truth") {
    const auto dir = scratch("cli_score");
    io::write_edge_list(dir / "toy_undirected.csv", toy::undirected_toy());
    io::write_edge_list(dir / "toy_directed.csv", toy::directed_toy());

    // resolution low enough to keep whole components together
    CHECK(run_cli("score --input " + (dir / "toy_undirected.csv").string() + " --out " +
                  (dir / "u.csv").string() + " --variant undirected --resolution 0.05",
                  dir / "u.log") == 0);
    const auto undirected = io::read_scores(dir / "u.csv");
    CHECK(undirected[23].score == doctest::Approx(1.0));
    CHECK(undirected[8].score == doctest::Approx(-0.0556).epsilon(1e-3));

    CHECK(run_cli("score --input " + (dir / "toy_directed.csv").string() + " --out " +
                  (dir / "d.csv").string() + " --variant directed --resolution 0.05",
                  dir / "d.log") == 0);
    const auto directed = io::read_scores(dir / "d.csv");
    CHECK(directed[23].score == doctest::Approx(1.0));
    CHECK(directed[8].score == doctest::Approx(-0.038).epsilon(1e-2));

    // timing lines are printed
    CHECK(slurp(dir / "u.log").find("scoring_seconds=") != std::string::npos);
}

TEST_CASE("cli: empty input warns and writes an empty score file") {
    const auto dir = scratch("cli_empty");
    std::ofstream(dir / "empty.csv");
    CHECK(run_cli("score --input " + (dir / "empty.csv").string() + " --out " +
                  (dir / "scores.csv").string(),
                  dir / "log.txt") == 0);
    CHECK(slurp(dir / "log.txt").find("warning") != std::string::npos);
    const auto scores = io::read_scores(dir / "scores.csv");
    CHECK(scores.empty());
}

TEST_CASE("cli: train-eval writes metrics and rank reports") {
    const auto dir = scratch("cli_traineval");
    // two small datasets so the rank aggregation kicks in
    CHECK(run_cli("generate --out " + (dir / "data").string() +
                  " --model ws --nodes 200 --m 2 --p 0.01 --patterns 5 --seed 3",
                  dir / "g1.log") == 0);
    CHECK(run_cli("generate --out " + (dir / "data").string() +
                  " --model ba --nodes 200 --m 2 --patterns 5 --seed 4",
                  dir / "g2.log") == 0);

    CHECK(run_cli("train-eval --datasets-root " + (dir / "data").string() + " --out " +
                  (dir / "eval").string() +
                  " --methods undirected boost_undirected --resolution 1 --seed 5",
                  dir / "te.log") == 0);
    CHECK(fs::exists(dir / "eval" / "metrics.csv"));
    CHECK(fs::exists(dir / "eval" / "rank_auc_roc.json"));
    CHECK(fs::exists(dir / "eval" / "rank_auc_pr.json"));
    const auto metrics = slurp(dir / "eval" / "metrics.csv");
    CHECK(metrics.find("boost_undirected") != std::string::npos);
}

TEST_CASE("cli: one dataset, one method yields metrics but no rank report") {
    const auto dir = scratch("cli_single");
    CHECK(run_cli("generate --out " + (dir / "data").string() +
                  " --model ws --nodes 150 --m 2 --p 0.01 --patterns 5 --seed 9",
                  dir / "g.log") == 0);
    CHECK(run_cli("train-eval --datasets-root " + (dir / "data").string() + " --out " +
                  (dir / "eval").string() + " --methods undirected --resolution 1 --seed 5",
                  dir / "te.log") == 0);
    CHECK(fs::exists(dir / "eval" / "metrics.csv"));
    CHECK_FALSE(fs::exists(dir / "eval" / "rank_auc_roc.json"));
}

TEST_CASE("cli: degenerate labels are reported without aborting the batch") {
    const auto dir = scratch("cli_degenerate");
    CHECK(run_cli("generate --out " + (dir / "data").string() +
                  " --model ws --nodes 150 --m 2 --p 0.01 --patterns 3 --seed 9",
                  dir / "g.log") == 0);
    // existing-mules labels exist, but 'separate' nodes asked with a label
    // source that matches nothing would degenerate; use a dataset whose
    // pattern tag never fires by filtering on a tag the base lacks after
    // relabelling: train-eval with label source existing_mules still works,
    // so force degeneracy through the laundering label on an unlabelled set.
    const auto ds_dir = dir / "data" / "ws_n150_m2_p0.01_x3";
    // blank out every label
    {
        std::ofstream labels(ds_dir / "labels.csv");
        labels << "node_id,label,pattern_tag\n";
        const auto g = io::read_edge_list(ds_dir / "edges.csv", true);
        for (std::size_t v = 0; v < g.node_count(); ++v) labels << v << ",0,none\n";
    }
    CHECK(run_cli("train-eval --dataset " + ds_dir.string() + " --out " + (dir / "eval").string() +
                  " --methods undirected --resolution 1 --seed 5",
                  dir / "te.log") == 0);
    const auto metrics = slurp(dir / "eval" / "metrics.csv");
    CHECK(metrics.find("degenerate") != std::string::npos);
}

TEST_CASE("cli: benchmark records one row per method/worker combination") {
    const auto dir = scratch("cli_bench");
    io::write_edge_list(dir / "toy.csv", toy::directed_toy());
    CHECK(run_cli("benchmark --input " + (dir / "toy.csv").string() + " --out " +
                  (dir / "timings.csv").string() +
                  " --variants undirected directed --workers 1,2 --resolution 0.05",
                  dir / "bench.log") == 0);
    const auto timings = slurp(dir / "timings.csv");
    CHECK(std::count(timings.begin(), timings.end(), '\n') == 5);  // header + 4 rows
    CHECK(timings.find("out_of_time") == std::string::npos);
}

TEST_CASE("cli: ingest emits graph, id map and propensity labels") {
    const auto dir = scratch("cli_ingest");
    std::ofstream(dir / "tx.csv") << "from,to,flag\n"
                                     "alice,bob,1\n"
                                     "bob,carol,0\n"
                                     "alice,carol,0\n"
                                     "carol,alice,1\n";
    CHECK(run_cli("ingest --input " + (dir / "tx.csv").string() + " --out " +
                  (dir / "out").string() + " --cutoffs 0.1 0.5",
                  dir / "ingest.log") == 0);
    CHECK(fs::exists(dir / "out" / "edges.csv"));
    CHECK(fs::exists(dir / "out" / "accounts.csv"));
    CHECK(fs::exists(dir / "out" / "labels_propensity.csv"));
    const auto log = slurp(dir / "ingest.log");
    CHECK(log.find("accounts=3") != std::string::npos);
    CHECK(log.find("positive rate") != std::string::npos);
}
