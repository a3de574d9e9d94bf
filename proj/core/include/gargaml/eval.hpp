#pragma once

#include <chrono>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace gargaml::eval {

struct MetricSet {
    double precision = 0.0;
    double f1 = 0.0;
    std::optional<double> auc_roc;  // empty when labels are single-class
    std::optional<double> auc_pr;
    double threshold = 0.5;
    bool no_positive_predictions = false;  // precision reported as 0 in that case
};

// Threshold metrics plus AUC-ROC (rank statistic with tie correction) and
// AUC-PR (step-wise integration over all thresholds, no interpolation).
// Positive prediction means score >= threshold.
MetricSet compute_metrics(std::span<const double> scores, std::span<const std::uint8_t> labels,
                          double threshold);

struct RankReport {
    std::vector<std::string> methods;
    std::vector<double> avg_rank;  // R_j, mean over datasets; rank 1 is best
    double friedman_q = 0.0;
    std::size_t q_degrees_freedom = 0;  // k - 1
    double nemenyi_cd = 0.0;            // NaN when k is outside the q-table
    std::size_t k = 0;
    std::size_t n_datasets = 0;
};

// table[dataset][method]; higher metric is better. Ties share the average
// rank. Missing entries must be pre-filled by the caller.
RankReport rank_methods(const std::vector<std::string>& methods,
                        const std::vector<std::vector<double>>& table);

// Two-tailed Nemenyi critical values at alpha = 0.05, k in [2, 10].
double nemenyi_q05(std::size_t k);

enum class RunStatus { ok, out_of_time, out_of_memory };

const char* to_string(RunStatus s);

struct TimingRecord {
    std::string method;
    std::string dataset;
    double wall_clock_seconds = 0.0;  // equals the budget on out_of_time
    std::uint64_t peak_memory_bytes = 0;
    bool peak_memory_available = false;
    RunStatus status = RunStatus::ok;
    double budget_seconds = 0.0;  // 0 = unlimited
};

// Runs `proc` with a cooperative deadline. proc must return false when it
// stopped because the deadline passed. Runs one at a time by design; callers
// wanting honest timings must not co-schedule.
using ScoringProcedure =
    std::function<bool(std::optional<std::chrono::steady_clock::time_point> deadline)>;

TimingRecord benchmark(std::string method, std::string dataset, double time_budget_seconds,
                       const ScoringProcedure& proc);

// Process peak RSS in bytes; 0 when the platform cannot supply it.
std::uint64_t peak_memory_bytes();

}  // namespace gargaml::eval
