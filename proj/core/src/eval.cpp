#include "gargaml/eval.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <new>
#include <numeric>
#include <stdexcept>

#if defined(__unix__) || defined(__APPLE__)
#include <sys/resource.h>
#endif

namespace gargaml::eval {

MetricSet compute_metrics(std::span<const double> scores, std::span<const std::uint8_t> labels,
                          double threshold) {
    if (scores.size() != labels.size()) {
        throw std::invalid_argument("scores and labels must have the same length");
    }
    MetricSet m;
    m.threshold = threshold;

    std::size_t tp = 0, fp = 0, fn = 0, pos = 0, neg = 0;
    for (std::size_t i = 0; i < scores.size(); ++i) {
        const bool truth = labels[i] != 0;
        const bool pred = scores[i] >= threshold;
        pos += truth;
        neg += !truth;
        tp += pred && truth;
        fp += pred && !truth;
        fn += !pred && truth;
    }
    m.no_positive_predictions = (tp + fp) == 0;
    m.precision = m.no_positive_predictions ? 0.0
                                            : static_cast<double>(tp) / static_cast<double>(tp + fp);
    const double recall = pos == 0 ? 0.0 : static_cast<double>(tp) / static_cast<double>(pos);
    m.f1 = (m.precision == 0.0 || recall == 0.0)
               ? 0.0
               : 2.0 * m.precision * recall / (m.precision + recall);

    if (pos == 0 || neg == 0) return m;  // AUCs undefined for single-class labels

    // AUC-ROC via the rank statistic, ties carry the average rank.
    std::vector<std::uint32_t> order(scores.size());
    std::iota(order.begin(), order.end(), 0u);
    std::sort(order.begin(), order.end(),
              [&](std::uint32_t a, std::uint32_t b) { return scores[a] < scores[b]; });
    double rank_sum_pos = 0.0;
    for (std::size_t i = 0; i < order.size();) {
        std::size_t j = i;
        while (j < order.size() && scores[order[j]] == scores[order[i]]) ++j;
        const double avg_rank = (static_cast<double>(i + 1) + static_cast<double>(j)) / 2.0;
        for (std::size_t t = i; t < j; ++t) {
            if (labels[order[t]]) rank_sum_pos += avg_rank;
        }
        i = j;
    }
    const double p = static_cast<double>(pos), q = static_cast<double>(neg);
    m.auc_roc = (rank_sum_pos - p * (p + 1.0) / 2.0) / (p * q);

    // AUC-PR: walk thresholds from the highest score down, one step per group
    // of tied scores; sum precision * recall-increment at each step.
    double auc_pr = 0.0;
    double prev_recall = 0.0;
    std::size_t cum_tp = 0, cum_fp = 0;
    for (std::size_t i = order.size(); i > 0;) {
        std::size_t j = i;  // (j, i] is a tied group from the top
        while (j > 0 && scores[order[j - 1]] == scores[order[i - 1]]) --j;
        for (std::size_t t = j; t < i; ++t) {
            if (labels[order[t]]) ++cum_tp; else ++cum_fp;
        }
        const double recall = static_cast<double>(cum_tp) / p;
        const double precision =
            static_cast<double>(cum_tp) / static_cast<double>(cum_tp + cum_fp);
        auc_pr += (recall - prev_recall) * precision;
        prev_recall = recall;
        i = j;
    }
    m.auc_pr = auc_pr;
    return m;
}

double nemenyi_q05(std::size_t k) {
    // Demšar's two-tailed studentized-range table at alpha = 0.05.
    static constexpr double kTable[] = {1.960, 2.343, 2.569, 2.728, 2.850,
                                        2.949, 3.031, 3.102, 3.164};  // k = 2..10
    if (k < 2 || k > 10) throw std::out_of_range("nemenyi q-table covers k in [2, 10]");
    return kTable[k - 2];
}

RankReport rank_methods(const std::vector<std::string>& methods,
                        const std::vector<std::vector<double>>& table) {
    const std::size_t k = methods.size();
    const std::size_t n = table.size();
    if (k < 2) throw std::invalid_argument("rank_methods needs at least 2 methods");
    if (n < 1) throw std::invalid_argument("rank_methods needs at least 1 dataset");
    for (const auto& row : table) {
        if (row.size() != k) throw std::invalid_argument("metric table row does not match methods");
    }

    RankReport report;
    report.methods = methods;
    report.k = k;
    report.n_datasets = n;
    report.q_degrees_freedom = k - 1;
    report.avg_rank.assign(k, 0.0);

    std::vector<std::uint32_t> order(k);
    for (const auto& row : table) {
        std::iota(order.begin(), order.end(), 0u);
        // higher metric -> better -> lower rank
        std::sort(order.begin(), order.end(), [&](std::uint32_t a, std::uint32_t b) {
            if (row[a] != row[b]) return row[a] > row[b];
            return a < b;
        });
        for (std::size_t i = 0; i < k;) {
            std::size_t j = i;
            while (j < k && row[order[j]] == row[order[i]]) ++j;
            const double avg = (static_cast<double>(i + 1) + static_cast<double>(j)) / 2.0;
            for (std::size_t t = i; t < j; ++t) report.avg_rank[order[t]] += avg;
            i = j;
        }
    }
    for (double& r : report.avg_rank) r /= static_cast<double>(n);

    const double kd = static_cast<double>(k), nd = static_cast<double>(n);
    double sum_sq = 0.0;
    for (double r : report.avg_rank) sum_sq += r * r;
    report.friedman_q = 12.0 * nd / (kd * (kd + 1.0)) *
                        (sum_sq - kd * (kd + 1.0) * (kd + 1.0) / 4.0);
    if (k <= 10) {
        report.nemenyi_cd = nemenyi_q05(k) * std::sqrt(kd * (kd + 1.0) / (6.0 * nd));
    } else {
        report.nemenyi_cd = std::numeric_limits<double>::quiet_NaN();
    }
    return report;
}

const char* to_string(RunStatus s) {
    switch (s) {
        case RunStatus::ok: return "ok";
        case RunStatus::out_of_time: return "out_of_time";
        case RunStatus::out_of_memory: return "out_of_memory";
    }
    return "?";
}

std::uint64_t peak_memory_bytes() {
#if defined(__unix__) || defined(__APPLE__)
    rusage usage{};
    if (getrusage(RUSAGE_SELF, &usage) == 0) {
#if defined(__APPLE__)
        return static_cast<std::uint64_t>(usage.ru_maxrss);  // bytes
#else
        return static_cast<std::uint64_t>(usage.ru_maxrss) * 1024;  // kilobytes
#endif
    }
#endif
    return 0;
}

TimingRecord benchmark(std::string method, std::string dataset, double time_budget_seconds,
                       const ScoringProcedure& proc) {
    if (time_budget_seconds < 0.0) throw std::invalid_argument("time budget must be >= 0");
    TimingRecord rec;
    rec.method = std::move(method);
    rec.dataset = std::move(dataset);
    rec.budget_seconds = time_budget_seconds;

    std::optional<std::chrono::steady_clock::time_point> deadline;
    const auto start = std::chrono::steady_clock::now();
    if (time_budget_seconds > 0.0) {
        deadline = start + std::chrono::duration_cast<std::chrono::steady_clock::duration>(
                               std::chrono::duration<double>(time_budget_seconds));
    }

    bool completed = false;
    try {
        completed = proc(deadline);
    } catch (const std::bad_alloc&) {
        rec.status = RunStatus::out_of_memory;
        rec.wall_clock_seconds =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        return rec;
    }
    const double elapsed =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

    if (!completed || (time_budget_seconds > 0.0 && elapsed > time_budget_seconds)) {
        rec.status = RunStatus::out_of_time;
        rec.wall_clock_seconds = time_budget_seconds;  // report the budget, not the overshoot
    } else {
        rec.status = RunStatus::ok;
        rec.wall_clock_seconds = elapsed;
    }
    const std::uint64_t peak = peak_memory_bytes();
    rec.peak_memory_bytes = peak;
    rec.peak_memory_available = peak != 0;
    return rec;
}

}  // namespace gargaml::eval
