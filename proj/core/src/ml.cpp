#include "gargaml/ml.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "gargaml/rng.hpp"

namespace gargaml::ml {

namespace {

constexpr std::uint32_t kMinLeaf = 10;
constexpr int kBoostStages = 100;
constexpr int kBoostDepth = 3;
constexpr double kLearningRate = 0.1;

struct Stats {
    double min = 0.0, mean = 0.0, max = 0.0, std_dev = 0.0;
};

Stats summarize(const std::vector<double>& values) {
    Stats s;
    if (values.empty()) return s;
    s.min = *std::min_element(values.begin(), values.end());
    s.max = *std::max_element(values.begin(), values.end());
    s.mean = std::accumulate(values.begin(), values.end(), 0.0) / static_cast<double>(values.size());
    double sq = 0.0;
    for (double v : values) sq += (v - s.mean) * (v - s.mean);
    s.std_dev = std::sqrt(sq / static_cast<double>(values.size()));
    return s;
}

double sigmoid(double z) { return 1.0 / (1.0 + std::exp(-z)); }

// Criterion abstraction for the shared greedy builder. `target` is the class
// label for Gini trees and the residual for regression trees.
struct GiniCriterion {
    // impurity decrease of a (left, right) split, scaled by parent size
    static double node_score(double sum, double count) {
        // Gini = 1 - p^2 - (1-p)^2 scaled by count; lower is purer
        const double p = sum / count;
        return count * (1.0 - p * p - (1.0 - p) * (1.0 - p));
    }
    static bool is_pure(double sum, double count) { return sum == 0.0 || sum == count; }
};

struct VarianceCriterion {
    static double node_score(double sum, double count) {
        (void)sum;
        (void)count;
        return 0.0;  // unused; variance path uses sums of squares
    }
};

struct SplitChoice {
    int feature = -1;
    double threshold = 0.0;
    double gain = -1.0;
};

// Greedy best split over midpoints of adjacent distinct values. Candidates
// must leave at least kMinLeaf rows on each side. Ties keep the first hit:
// features are scanned in index order and thresholds ascending, so equal
// gains resolve to the lower feature index, then the lower threshold.
template <bool Regression>
SplitChoice best_split(std::span<const FeatureRow> rows, const std::vector<std::uint32_t>& idx,
                       std::span<const double> target) {
    SplitChoice best;
    const std::size_t count = idx.size();
    if (count < 2 * kMinLeaf) return best;

    double total_sum = 0.0, total_sq = 0.0;
    for (std::uint32_t i : idx) {
        total_sum += target[i];
        total_sq += target[i] * target[i];
    }
    const double total = static_cast<double>(count);

    std::vector<std::pair<double, double>> vals(count);  // (feature value, target)
    for (std::size_t f = 0; f < kFeatureCount; ++f) {
        for (std::size_t i = 0; i < count; ++i) {
            vals[i] = {rows[idx[i]].x[f], target[idx[i]]};
        }
        std::sort(vals.begin(), vals.end(),
                  [](const auto& a, const auto& b) { return a.first < b.first; });

        double left_sum = 0.0, left_sq = 0.0;
        for (std::size_t i = 1; i < count; ++i) {
            left_sum += vals[i - 1].second;
            left_sq += vals[i - 1].second * vals[i - 1].second;
            if (i < kMinLeaf || count - i < kMinLeaf) continue;
            if (vals[i - 1].first >= vals[i].first) continue;  // not a boundary

            const double nl = static_cast<double>(i);
            const double nr = total - nl;
            double gain;
            if constexpr (Regression) {
                // SSE reduction
                const double right_sum = total_sum - left_sum;
                const double parent = total_sq - total_sum * total_sum / total;
                const double left = left_sq - left_sum * left_sum / nl;
                const double right = (total_sq - left_sq) - right_sum * right_sum / nr;
                gain = parent - left - right;
            } else {
                const double right_sum = total_sum - left_sum;
                gain = GiniCriterion::node_score(total_sum, total) -
                       GiniCriterion::node_score(left_sum, nl) -
                       GiniCriterion::node_score(right_sum, nr);
            }
            if (gain > best.gain) {
                best.gain = gain;
                best.feature = static_cast<int>(f);
                best.threshold = (vals[i - 1].first + vals[i].first) / 2.0;
            }
        }
    }
    return best;
}

// Leaf value hooks: positive fraction for classification, Newton step
// sum(residual)/sum(hessian) for boosting.
struct TreeBuilder {
    std::span<const FeatureRow> rows;
    std::span<const double> target;
    std::span<const double> hessian;  // empty for classification
    bool regression = false;
    int max_depth = -1;  // -1 = unlimited

    Tree tree;

    double leaf_value(const std::vector<std::uint32_t>& idx) const {
        double sum = 0.0;
        for (std::uint32_t i : idx) sum += target[i];
        if (!regression) return sum / static_cast<double>(idx.size());
        double hess = 0.0;
        for (std::uint32_t i : idx) hess += hessian[i];
        if (hess < 1e-12) return 0.0;
        return sum / hess;
    }

    bool is_constant(const std::vector<std::uint32_t>& idx) const {
        const double first = target[idx.front()];
        for (std::uint32_t i : idx) {
            if (target[i] != first) return false;
        }
        return true;
    }

    // Iterative construction; deep trees on large tables would otherwise
    // exhaust the stack.
    void build(std::vector<std::uint32_t> root_idx) {
        struct Item {
            std::vector<std::uint32_t> idx;
            int depth;
            std::int32_t parent;  // -1 for the root
            bool is_left;
        };
        std::vector<Item> pending;
        pending.push_back({std::move(root_idx), 0, -1, false});
        while (!pending.empty()) {
            Item item = std::move(pending.back());
            pending.pop_back();

            const auto node_id = static_cast<std::int32_t>(tree.nodes.size());
            tree.nodes.emplace_back();
            tree.nodes[static_cast<std::size_t>(node_id)].samples =
                static_cast<std::uint32_t>(item.idx.size());
            if (item.parent >= 0) {
                TreeNode& parent = tree.nodes[static_cast<std::size_t>(item.parent)];
                (item.is_left ? parent.left : parent.right) = node_id;
            }

            const bool depth_capped = max_depth >= 0 && item.depth >= max_depth;
            SplitChoice split;
            if (!depth_capped && !is_constant(item.idx)) {
                split = regression ? best_split<true>(rows, item.idx, target)
                                   : best_split<false>(rows, item.idx, target);
            }
            if (split.feature < 0) {
                tree.nodes[static_cast<std::size_t>(node_id)].value = leaf_value(item.idx);
                continue;
            }

            std::vector<std::uint32_t> left_idx, right_idx;
            left_idx.reserve(item.idx.size());
            right_idx.reserve(item.idx.size());
            for (std::uint32_t i : item.idx) {
                (rows[i].x[static_cast<std::size_t>(split.feature)] <= split.threshold ? left_idx
                                                                                       : right_idx)
                    .push_back(i);
            }
            TreeNode& node = tree.nodes[static_cast<std::size_t>(node_id)];
            node.feature = split.feature;
            node.threshold = split.threshold;
            pending.push_back({std::move(right_idx), item.depth + 1, node_id, false});
            pending.push_back({std::move(left_idx), item.depth + 1, node_id, true});
        }
    }
};

Tree single_leaf(double value, std::uint32_t samples) {
    Tree t;
    t.nodes.push_back(TreeNode{.value = value, .samples = samples});
    return t;
}

}  // namespace

std::vector<FeatureRow> build_features(const Graph& g, std::span<const double> scores,
                                       std::span<const std::uint8_t> labels) {
    if (scores.size() != g.node_count() || labels.size() != g.node_count()) {
        throw std::invalid_argument("scores/labels must cover every node");
    }
    std::vector<FeatureRow> rows(g.node_count());
    std::vector<double> neigh_deg, neigh_score;
    for (NodeId v = 0; v < g.node_count(); ++v) {
        FeatureRow& r = rows[v];
        r.node = v;
        r.label = labels[v];
        const auto nbrs = g.neighbours(v);
        neigh_deg.clear();
        neigh_score.clear();
        for (NodeId w : nbrs) {
            neigh_deg.push_back(static_cast<double>(g.degree(w)));
            neigh_score.push_back(scores[w]);
        }
        const Stats d = summarize(neigh_deg);
        const Stats s = summarize(neigh_score);
        r.x = {scores[v], static_cast<double>(nbrs.size()),
               d.min, d.mean, d.max, d.std_dev,
               s.min, s.mean, s.max, s.std_dev};
    }
    return rows;
}

std::pair<std::vector<FeatureRow>, std::vector<FeatureRow>> stratified_split(
    std::span<const FeatureRow> rows, double train_fraction, std::uint64_t seed) {
    if (train_fraction <= 0.0 || train_fraction >= 1.0) {
        throw std::invalid_argument("train_fraction must be in (0, 1)");
    }
    std::vector<std::uint32_t> by_class[2];
    for (std::size_t i = 0; i < rows.size(); ++i) {
        by_class[rows[i].label ? 1 : 0].push_back(static_cast<std::uint32_t>(i));
    }
    for (const auto& cls : by_class) {
        if (cls.size() < 2) {
            throw std::invalid_argument("cannot stratify: a class has fewer than 2 samples");
        }
    }

    Rng rng(Rng::derive(seed, "split"));
    std::vector<std::uint8_t> in_train(rows.size(), 0);
    for (auto& cls : by_class) {
        rng.shuffle(cls);
        const auto want = static_cast<std::size_t>(
            std::llround(train_fraction * static_cast<double>(cls.size())));
        const std::size_t take = std::clamp<std::size_t>(want, 1, cls.size() - 1);
        for (std::size_t i = 0; i < take; ++i) in_train[cls[i]] = 1;
    }

    std::pair<std::vector<FeatureRow>, std::vector<FeatureRow>> out;
    for (std::size_t i = 0; i < rows.size(); ++i) {
        (in_train[i] ? out.first : out.second).push_back(rows[i]);
    }
    return out;
}

double Tree::predict(const std::array<double, kFeatureCount>& x) const {
    std::int32_t at = 0;
    while (nodes[static_cast<std::size_t>(at)].feature >= 0) {
        const TreeNode& n = nodes[static_cast<std::size_t>(at)];
        at = x[static_cast<std::size_t>(n.feature)] <= n.threshold ? n.left : n.right;
    }
    return nodes[static_cast<std::size_t>(at)].value;
}

TreeModel train_decision_tree(std::span<const FeatureRow> train) {
    TreeModel model;
    model.kind = ModelKind::decision_tree;

    double positives = 0.0;
    for (const FeatureRow& r : train) positives += r.label;
    const auto count = static_cast<std::uint32_t>(train.size());
    const double prior = train.empty() ? 0.0 : positives / static_cast<double>(train.size());
    if (train.size() < 20 || positives == 0.0 || positives == train.size()) {
        model.trees.push_back(single_leaf(prior, count));
        return model;
    }

    std::vector<double> target(train.size());
    for (std::size_t i = 0; i < train.size(); ++i) target[i] = train[i].label;
    std::vector<std::uint32_t> idx(train.size());
    std::iota(idx.begin(), idx.end(), 0u);

    TreeBuilder builder{.rows = train, .target = target, .hessian = {}, .regression = false,
                        .max_depth = -1};
    builder.build(std::move(idx));
    model.trees.push_back(std::move(builder.tree));
    return model;
}

TreeModel train_gradient_boost(std::span<const FeatureRow> train) {
    TreeModel model;
    model.kind = ModelKind::gradient_boost;
    model.learning_rate = kLearningRate;

    double positives = 0.0;
    for (const FeatureRow& r : train) positives += r.label;
    if (train.empty() || positives == 0.0 || positives == train.size()) {
        throw std::invalid_argument("gradient boosting needs both classes present");
    }
    const double prior = positives / static_cast<double>(train.size());
    model.base_score = std::log(prior / (1.0 - prior));

    std::vector<double> margin(train.size(), model.base_score);
    std::vector<double> residual(train.size()), hessian(train.size());

    for (int stage = 0; stage < kBoostStages; ++stage) {
        for (std::size_t i = 0; i < train.size(); ++i) {
            const double p = sigmoid(margin[i]);
            residual[i] = static_cast<double>(train[i].label) - p;
            hessian[i] = p * (1.0 - p);
        }
        std::vector<std::uint32_t> idx(train.size());
        std::iota(idx.begin(), idx.end(), 0u);
        TreeBuilder builder{.rows = train, .target = residual, .hessian = hessian,
                            .regression = true, .max_depth = kBoostDepth};
        builder.build(std::move(idx));
        for (std::size_t i = 0; i < train.size(); ++i) {
            margin[i] += kLearningRate * builder.tree.predict(train[i].x);
        }
        model.trees.push_back(std::move(builder.tree));
    }
    return model;
}

std::vector<double> predict(const TreeModel& model, std::span<const FeatureRow> rows) {
    std::vector<double> out(rows.size(), 0.0);
    if (model.kind == ModelKind::decision_tree) {
        for (std::size_t i = 0; i < rows.size(); ++i) {
            out[i] = model.trees.front().predict(rows[i].x);
        }
        return out;
    }
    for (std::size_t i = 0; i < rows.size(); ++i) {
        double margin = model.base_score;
        for (const Tree& t : model.trees) margin += model.learning_rate * t.predict(rows[i].x);
        out[i] = sigmoid(margin);
    }
    return out;
}

std::string serialize(const TreeModel& model) {
    std::ostringstream out;
    out.precision(17);
    out << "gargaml-tree-model 1\n";
    out << "kind " << (model.kind == ModelKind::decision_tree ? "decision_tree" : "gradient_boost")
        << "\n";
    out << "learning_rate " << model.learning_rate << "\n";
    out << "base_score " << model.base_score << "\n";
    out << "trees " << model.trees.size() << "\n";
    for (const Tree& t : model.trees) {
        out << "tree " << t.nodes.size() << "\n";
        for (const TreeNode& n : t.nodes) {
            if (n.feature < 0) {
                out << "leaf " << n.value << " " << n.samples << "\n";
            } else {
                out << "split " << n.feature << " " << n.threshold << " " << n.left << " "
                    << n.right << " " << n.samples << "\n";
            }
        }
    }
    return out.str();
}

TreeModel deserialize(std::istream& in) {
    std::string word;
    int version = 0;
    in >> word >> version;
    if (word != "gargaml-tree-model" || version != 1) {
        throw std::runtime_error("unrecognised model header");
    }
    TreeModel model;
    std::string kind;
    std::size_t tree_count = 0;
    in >> word >> kind;
    model.kind = kind == "decision_tree" ? ModelKind::decision_tree : ModelKind::gradient_boost;
    in >> word >> model.learning_rate;
    in >> word >> model.base_score;
    in >> word >> tree_count;
    model.trees.resize(tree_count);
    for (Tree& t : model.trees) {
        std::size_t node_count = 0;
        in >> word >> node_count;
        if (word != "tree") throw std::runtime_error("malformed model: expected tree");
        t.nodes.resize(node_count);
        for (TreeNode& n : t.nodes) {
            in >> word;
            if (word == "leaf") {
                in >> n.value >> n.samples;
            } else if (word == "split") {
                in >> n.feature >> n.threshold >> n.left >> n.right >> n.samples;
            } else {
                throw std::runtime_error("malformed model: unknown node kind '" + word + "'");
            }
        }
    }
    if (!in) throw std::runtime_error("malformed model: truncated input");
    return model;
}

TreeModel deserialize_string(const std::string& text) {
    std::istringstream in(text);
    return deserialize(in);
}

}  // namespace gargaml::ml
