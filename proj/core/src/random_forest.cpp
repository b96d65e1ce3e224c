#include "laundergraph/random_forest.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <stdexcept>
#include <string>

#include "laundergraph/error.hpp"
#include "laundergraph/parallel.hpp"

namespace laundergraph {

namespace {

constexpr double kGainTolerance = 1e-12;

std::mt19937_64 tree_engine(std::uint64_t seed, std::size_t tree, std::uint32_t stream) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(tree), static_cast<std::uint32_t>(tree >> 32), stream};
    return std::mt19937_64(seq);
}

double gini(std::size_t neg, std::size_t pos) {
    const double n = static_cast<double>(neg + pos);
    if (n == 0) return 0.0;
    const double p = static_cast<double>(pos) / n;
    return 2.0 * p * (1.0 - p);
}

struct Split {
    int feature = -1;
    double threshold = 0.0;
    double gain = -1.0;
};

class TreeBuilder {
public:
    TreeBuilder(const Matrix& x, std::span<const int> y, std::size_t mtry, std::size_t min_leaf,
                std::mt19937_64 rng)
        : x_(x), y_(y), mtry_(mtry), min_leaf_(min_leaf), rng_(std::move(rng)) {
        features_.resize(x.cols());
        std::iota(features_.begin(), features_.end(), 0);
    }

    DecisionTree build(std::vector<std::size_t> rows) {
        DecisionTree tree;
        struct Pending {
            std::int32_t node;
            std::vector<std::size_t> rows;
        };
        std::vector<Pending> stack;
        tree.nodes.push_back(make_node(rows));
        stack.push_back({0, std::move(rows)});
        while (!stack.empty()) {
            Pending item = std::move(stack.back());
            stack.pop_back();
            TreeNode& node = tree.nodes[static_cast<std::size_t>(item.node)];
            if (node.negatives == 0 || node.positives == 0) continue;
            if (item.rows.size() < 2 * min_leaf_) continue;
            const Split split = best_split(item.rows);
            if (split.feature < 0) continue;

            std::vector<std::size_t> left;
            std::vector<std::size_t> right;
            for (std::size_t r : item.rows) {
                (x_(r, static_cast<std::size_t>(split.feature)) <= split.threshold ? left : right).push_back(r);
            }
            const auto left_id = static_cast<std::int32_t>(tree.nodes.size());
            tree.nodes.push_back(make_node(left));
            tree.nodes.push_back(make_node(right));
            TreeNode& parent = tree.nodes[static_cast<std::size_t>(item.node)];
            parent.feature = split.feature;
            parent.threshold = split.threshold;
            parent.left = left_id;
            parent.right = left_id + 1;
            // Right pushed first so the left subtree is expanded first.
            stack.push_back({left_id + 1, std::move(right)});
            stack.push_back({left_id, std::move(left)});
        }
        return tree;
    }

private:
    TreeNode make_node(const std::vector<std::size_t>& rows) const {
        TreeNode node;
        for (std::size_t r : rows) (y_[r] == 1 ? node.positives : node.negatives)++;
        return node;
    }

    Split best_split(const std::vector<std::size_t>& rows) {
        std::shuffle(features_.begin(), features_.end(), rng_);
        std::size_t pos_total = 0;
        for (std::size_t r : rows) pos_total += static_cast<std::size_t>(y_[r] == 1);
        const std::size_t n = rows.size();
        const double parent_impurity = gini(n - pos_total, pos_total);

        Split best;
        std::size_t evaluated = 0;
        std::vector<std::pair<double, int>> column(n);
        for (std::size_t f : features_) {
            if (evaluated == mtry_) break;
            for (std::size_t i = 0; i < n; ++i) column[i] = {x_(rows[i], f), y_[rows[i]]};
            std::sort(column.begin(), column.end());
            if (column.front().first == column.back().first) continue;  // constant here
            ++evaluated;

            std::size_t left_pos = 0;
            for (std::size_t i = 0; i + 1 < n; ++i) {
                left_pos += static_cast<std::size_t>(column[i].second == 1);
                if (column[i].first == column[i + 1].first) continue;
                const std::size_t left_n = i + 1;
                const std::size_t right_n = n - left_n;
                if (left_n < min_leaf_ || right_n < min_leaf_) continue;
                const double weighted =
                    (static_cast<double>(left_n) * gini(left_n - left_pos, left_pos) +
                     static_cast<double>(right_n) *
                         gini(right_n - (pos_total - left_pos), pos_total - left_pos)) /
                    static_cast<double>(n);
                const double gain = parent_impurity - weighted;
                const double lo = column[i].first;
                const double hi = column[i + 1].first;
                double threshold = lo + (hi - lo) / 2.0;
                if (!(threshold < hi)) threshold = lo;
                if (better(gain, static_cast<int>(f), threshold, best)) {
                    best = {static_cast<int>(f), threshold, gain};
                }
            }
        }
        return best;
    }

    static bool better(double gain, int feature, double threshold, const Split& best) {
        if (best.feature < 0) return true;
        if (gain > best.gain + kGainTolerance) return true;
        if (gain < best.gain - kGainTolerance) return false;
        if (feature != best.feature) return feature < best.feature;
        return threshold < best.threshold;
    }

    const Matrix& x_;
    std::span<const int> y_;
    std::size_t mtry_;
    std::size_t min_leaf_;
    std::mt19937_64 rng_;
    std::vector<std::size_t> features_;
};

void check_width(const RandomForestModel& model, std::size_t width) {
    if (width != model.schema.width) {
        throw SchemaMismatchError("random forest expects " + std::to_string(model.schema.width) +
                                  " features, got " + std::to_string(width));
    }
}

}  // namespace

bool DecisionTree::votes_positive(std::span<const double> x) const {
    std::size_t at = 0;
    while (nodes[at].feature >= 0) {
        const TreeNode& node = nodes[at];
        at = static_cast<std::size_t>(x[static_cast<std::size_t>(node.feature)] <= node.threshold ? node.left
                                                                                                   : node.right);
    }
    return nodes[at].positives > nodes[at].negatives;
}

std::vector<std::size_t> bootstrap_indices(std::size_t n, std::uint64_t seed, std::size_t tree) {
    if (n == 0) return {};
    auto rng = tree_engine(seed, tree, 0);
    std::uniform_int_distribution<std::size_t> pick(0, n - 1);
    std::vector<std::size_t> out(n);
    for (auto& i : out) i = pick(rng);
    return out;
}

RandomForestModel train_random_forest(const Matrix& x, std::span<const int> y, const TrainConfig& config,
                                      SchemaTag schema) {
    config.validate();
    check_training_data(x, y);
    if (schema.width == 0) schema = SchemaTag::anonymous(x.cols());
    if (schema.width != x.cols()) throw SchemaMismatchError("random forest: schema width differs from data");

    const auto order = canonical_row_order(x, y);
    const Matrix xs = x.select(order);
    std::vector<int> ys(order.size());
    for (std::size_t i = 0; i < order.size(); ++i) ys[i] = y[order[i]];

    RandomForestModel model;
    model.mtry = config.mtry > 0
                     ? config.mtry
                     : std::max(1, static_cast<int>(std::floor(std::sqrt(static_cast<double>(x.cols())))));
    model.mtry = std::min(model.mtry, static_cast<int>(x.cols()));
    model.min_leaf = config.min_leaf;
    model.seed = config.seed;
    model.schema = schema;
    model.trees.resize(static_cast<std::size_t>(config.n_trees));

    parallel_for(model.trees.size(), config.workers, [&](std::size_t t) {
        auto rows = bootstrap_indices(xs.rows(), config.seed, t);
        TreeBuilder builder(xs, ys, static_cast<std::size_t>(model.mtry), static_cast<std::size_t>(model.min_leaf),
                            tree_engine(config.seed, t, 1));
        model.trees[t] = builder.build(std::move(rows));
    });
    return model;
}

std::size_t rf_positive_votes(const RandomForestModel& model, std::span<const double> x) {
    check_width(model, x.size());
    std::size_t votes = 0;
    for (const auto& tree : model.trees) votes += static_cast<std::size_t>(tree.votes_positive(x));
    return votes;
}

double rf_score(const RandomForestModel& model, std::span<const double> x) {
    if (model.trees.empty()) throw std::invalid_argument("rf_score: model has no trees");
    return static_cast<double>(rf_positive_votes(model, x)) / static_cast<double>(model.trees.size());
}

}  // namespace laundergraph
