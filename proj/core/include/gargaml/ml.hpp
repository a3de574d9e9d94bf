#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "gargaml/graph.hpp"

namespace gargaml::ml {

inline constexpr std::size_t kFeatureCount = 10;

// Feature column order (fixed, also used by the model serialization):
//   0 own_score   1 own_degree
//   2 deg_min     3 deg_mean    4 deg_max    5 deg_std
//   6 score_min   7 score_mean  8 score_max  9 score_std
// Neighbour statistics are over the undirected first-order neighbours;
// population standard deviation; all four are 0 for isolated nodes.
struct FeatureRow {
    NodeId node = 0;
    std::array<double, kFeatureCount> x{};
    std::uint8_t label = 0;
};

std::vector<FeatureRow> build_features(const Graph& g, std::span<const double> scores,
                                       std::span<const std::uint8_t> labels);

// Per-class proportional split; throws std::invalid_argument when a class has
// fewer than 2 members.
std::pair<std::vector<FeatureRow>, std::vector<FeatureRow>> stratified_split(
    std::span<const FeatureRow> rows, double train_fraction, std::uint64_t seed);

struct TreeNode {
    std::int32_t feature = -1;  // -1 marks a leaf
    double threshold = 0.0;     // go left when x[feature] <= threshold
    std::int32_t left = -1;
    std::int32_t right = -1;
    double value = 0.0;  // leaf output
    std::uint32_t samples = 0;
};

struct Tree {
    std::vector<TreeNode> nodes;  // nodes[0] is the root
    double predict(const std::array<double, kFeatureCount>& x) const;
};

enum class ModelKind { decision_tree, gradient_boost };

struct TreeModel {
    ModelKind kind = ModelKind::decision_tree;
    std::vector<Tree> trees;
    double learning_rate = 0.0;
    double base_score = 0.0;  // log-odds prior (gradient_boost only)
};

// Gini-criterion classification tree, min 10 samples per leaf, unlimited
// depth. Fewer than 20 rows or a single class gives a one-leaf prior model.
TreeModel train_decision_tree(std::span<const FeatureRow> train);

// Logistic-loss boosting: 100 regression trees of depth <= 3 fit to the
// residuals, single-Newton-step leaf values, learning rate 0.1, min 10
// samples per leaf.
TreeModel train_gradient_boost(std::span<const FeatureRow> train);

// Probability per row, in [0, 1].
std::vector<double> predict(const TreeModel& model, std::span<const FeatureRow> rows);

std::string serialize(const TreeModel& model);
TreeModel deserialize(std::istream& in);
TreeModel deserialize_string(const std::string& text);

}  // namespace gargaml::ml
