#include <doctest.h>

#include <stdexcept>

#include <chrono>
#include <cmath>
#include <random>
#include <thread>

#include "gargaml/eval.hpp"

using namespace gargaml::eval;

namespace {

// O(P*N) pairwise comparison oracle with half credit for ties.
double pairwise_auc(const std::vector<double>& scores, const std::vector<std::uint8_t>& labels) {
    double wins = 0.0;
    std::size_t pairs = 0;
    for (std::size_t i = 0; i < scores.size(); ++i) {
        if (!labels[i]) continue;
        for (std::size_t j = 0; j < scores.size(); ++j) {
            if (labels[j]) continue;
            ++pairs;
            if (scores[i] > scores[j]) wins += 1.0;
            else if (scores[i] == scores[j]) wins += 0.5;
        }
    }
    return wins / static_cast<double>(pairs);
}

}  // namespace

TEST_CASE("perfect separation maxes both AUCs") {
    const std::vector<double> scores{0.9, 0.8, 0.2, 0.1};
    const std::vector<std::uint8_t> labels{1, 1, 0, 0};
    const auto m = compute_metrics(scores, labels, 0.5);
    CHECK(*m.auc_roc == 1.0);
    CHECK(*m.auc_pr == 1.0);
    CHECK(m.precision == 1.0);
    CHECK(m.f1 == 1.0);
}

TEST_CASE("constant scores give chance AUC-ROC and base-rate AUC-PR") {
    const std::vector<double> scores(10, 0.3);
    std::vector<std::uint8_t> labels(10, 0);
    labels[0] = labels[1] = labels[2] = 1;
    const auto m = compute_metrics(scores, labels, 0.5);
    CHECK(*m.auc_roc == doctest::Approx(0.5));
    CHECK(*m.auc_pr == doctest::Approx(0.3).epsilon(1e-12));
}

TEST_CASE("the four-point hand example") {
    const std::vector<double> scores{0.9, 0.8, 0.7, 0.6};
    const std::vector<std::uint8_t> labels{1, 0, 1, 0};
    const auto m = compute_metrics(scores, labels, 0.5);
    CHECK(*m.auc_roc == doctest::Approx(0.75));
    CHECK(*m.auc_pr == doctest::Approx((1.0 + 2.0 / 3.0) / 2.0));
}

TEST_CASE("single-class labels leave the AUCs undefined but keep the rest") {
    const std::vector<double> scores{0.9, 0.4, 0.6};
    const std::vector<std::uint8_t> labels{1, 1, 1};
    const auto m = compute_metrics(scores, labels, 0.5);
    CHECK_FALSE(m.auc_roc.has_value());
    CHECK_FALSE(m.auc_pr.has_value());
    CHECK(m.precision == 1.0);
    CHECK(m.f1 > 0.0);
}

TEST_CASE("precision is zero-with-flag when nothing is predicted positive") {
    const std::vector<double> scores{0.1, 0.2, 0.3};
    const std::vector<std::uint8_t> labels{1, 0, 1};
    const auto m = compute_metrics(scores, labels, 0.5);
    CHECK(m.no_positive_predictions);
    CHECK(m.precision == 0.0);
    CHECK(m.f1 == 0.0);
}

TEST_CASE("rank AUC equals the brute-force pairwise statistic") {
    std::mt19937 rng(17);
    std::uniform_real_distribution<double> value(0.0, 1.0);
    std::uniform_int_distribution<int> size(2, 50);
    std::uniform_int_distribution<int> coin(0, 1);
    for (int trial = 0; trial < 100; ++trial) {
        const int n = size(rng);
        std::vector<double> scores(n);
        std::vector<std::uint8_t> labels(n);
        bool has_pos = false, has_neg = false;
        for (int i = 0; i < n; ++i) {
            // coarse grid of score values provokes plenty of ties
            scores[i] = std::round(value(rng) * 4.0) / 4.0;
            labels[i] = static_cast<std::uint8_t>(coin(rng));
            (labels[i] ? has_pos : has_neg) = true;
        }
        if (!has_pos || !has_neg) continue;
        const auto m = compute_metrics(scores, labels, 0.5);
        CHECK(*m.auc_roc == doctest::Approx(pairwise_auc(scores, labels)).epsilon(1e-12));
    }
}

TEST_CASE("AUC-ROC label-complement symmetry without ties") {
    std::mt19937 rng(23);
    std::uniform_real_distribution<double> value(0.0, 1.0);
    std::vector<double> scores(40);
    std::vector<std::uint8_t> labels(40);
    for (int i = 0; i < 40; ++i) {
        scores[i] = value(rng) + i * 1e-6;  // distinct
        labels[i] = i % 3 == 0;
    }
    std::vector<double> negated(scores);
    for (double& s : negated) s = -s;
    const auto a = compute_metrics(scores, labels, 0.5);
    const auto b = compute_metrics(negated, labels, 0.5);
    CHECK(*a.auc_roc == doctest::Approx(1.0 - *b.auc_roc).epsilon(1e-12));
}

TEST_CASE("f1 is the harmonic mean unless either side is zero") {
    const std::vector<double> scores{0.9, 0.9, 0.1, 0.9};
    const std::vector<std::uint8_t> labels{1, 0, 1, 1};
    const auto m = compute_metrics(scores, labels, 0.5);
    // tp=2 fp=1 fn=1: precision 2/3, recall 2/3
    CHECK(m.precision == doctest::Approx(2.0 / 3.0));
    CHECK(m.f1 == doctest::Approx(2.0 / 3.0));
}

TEST_CASE("friedman hand case k=3 N=2 gives Q=4") {
    const std::vector<std::string> methods{"a", "b", "c"};
    // both datasets order the methods the same way
    const std::vector<std::vector<double>> table{{0.9, 0.8, 0.7}, {0.95, 0.85, 0.75}};
    const auto r = rank_methods(methods, table);
    CHECK(r.avg_rank == std::vector<double>{1.0, 2.0, 3.0});
    CHECK(r.friedman_q == doctest::Approx(4.0));
    CHECK(r.q_degrees_freedom == 2);
}

TEST_CASE("all-tied table ranks everyone (k+1)/2 and Q=0") {
    const std::vector<std::string> methods{"a", "b", "c", "d"};
    const std::vector<std::vector<double>> table{{0.5, 0.5, 0.5, 0.5}, {0.1, 0.1, 0.1, 0.1}};
    const auto r = rank_methods(methods, table);
    for (double rank : r.avg_rank) CHECK(rank == doctest::Approx(2.5));
    CHECK(r.friedman_q == doctest::Approx(0.0));
}

TEST_CASE("per-dataset ranks always sum to k(k+1)/2") {
    std::mt19937 rng(31);
    std::uniform_real_distribution<double> value(0.0, 1.0);
    const std::vector<std::string> methods{"a", "b", "c", "d", "e"};
    for (int trial = 0; trial < 20; ++trial) {
        std::vector<std::vector<double>> table(1, std::vector<double>(5));
        for (double& v : table[0]) v = std::round(value(rng) * 3.0) / 3.0;
        const auto r = rank_methods(methods, table);
        double sum = 0.0;
        for (double rank : r.avg_rank) sum += rank;  // N=1 so avg == per-dataset rank
        CHECK(sum == doctest::Approx(15.0));
    }
}

TEST_CASE("nemenyi CD for k=8 N=66 follows the formula") {
    const std::vector<std::string> methods{"m1", "m2", "m3", "m4", "m5", "m6", "m7", "m8"};
    std::vector<std::vector<double>> table(66, std::vector<double>(8));
    for (std::size_t d = 0; d < 66; ++d) {
        for (std::size_t m = 0; m < 8; ++m) table[d][m] = static_cast<double>(m);
    }
    const auto r = rank_methods(methods, table);
    const double expected = nemenyi_q05(8) * std::sqrt(8.0 * 9.0 / (6.0 * 66.0));
    CHECK(r.nemenyi_cd == doctest::Approx(expected).epsilon(1e-12));
    CHECK(std::abs(r.nemenyi_cd - expected) < 1e-9);
}

TEST_CASE("rank_methods rejects degenerate shapes") {
    CHECK_THROWS_AS(rank_methods({"only"}, {{0.5}}), std::invalid_argument);
    CHECK_THROWS_AS(rank_methods({"a", "b"}, {}), std::invalid_argument);
    CHECK_THROWS_AS(rank_methods({"a", "b"}, {{0.5}}), std::invalid_argument);
    CHECK_THROWS_AS(nemenyi_q05(11), std::out_of_range);
}

TEST_CASE("benchmark reports ok within budget") {
    const auto rec = benchmark("toy", "none", 10.0, [](auto) {
        std::this_thread::sleep_for(std::chrono::milliseconds(5));
        return true;
    });
    CHECK(rec.status == RunStatus::ok);
    CHECK(rec.wall_clock_seconds < 10.0);
    CHECK(rec.wall_clock_seconds > 0.0);
#if defined(__unix__)
    CHECK(rec.peak_memory_available);
    CHECK(rec.peak_memory_bytes > 0);
#endif
}

TEST_CASE("breaching the budget reports out_of_time at the budget value") {
    const double budget = 0.01;
    const auto rec = benchmark("slow", "none", budget, [&](auto deadline) {
        REQUIRE(deadline.has_value());
        while (std::chrono::steady_clock::now() <= *deadline) {
            std::this_thread::sleep_for(std::chrono::milliseconds(1));
        }
        return false;  // cooperative abort
    });
    CHECK(rec.status == RunStatus::out_of_time);
    CHECK(rec.wall_clock_seconds == budget);
}

TEST_CASE("zero budget means unlimited") {
    const auto rec = benchmark("toy", "none", 0.0, [](auto deadline) {
        CHECK_FALSE(deadline.has_value());
        return true;
    });
    CHECK(rec.status == RunStatus::ok);
}
