#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "laundergraph/matrix.hpp"
#include "laundergraph/train_config.hpp"

namespace laundergraph {

struct TreeNode {
    std::int32_t feature = -1;  // -1 marks a leaf
    double threshold = 0.0;     // go left when x[feature] <= threshold
    std::int32_t left = -1;
    std::int32_t right = -1;
    std::uint32_t negatives = 0;
    std::uint32_t positives = 0;

    bool operator==(const TreeNode&) const = default;
};

struct DecisionTree {
    std::vector<TreeNode> nodes;  // nodes[0] is the root

    /// Majority class of the reached leaf; ties vote negative.
    bool votes_positive(std::span<const double> x) const;
    bool operator==(const DecisionTree&) const = default;
};

struct RandomForestModel {
    std::vector<DecisionTree> trees;
    int mtry = 0;
    int min_leaf = 1;
    std::uint64_t seed = 0;
    SchemaTag schema;

    bool operator==(const RandomForestModel&) const = default;
};

/// n draws with replacement from [0, n) for tree `tree`, seeded by (seed, tree).
std::vector<std::size_t> bootstrap_indices(std::size_t n, std::uint64_t seed, std::size_t tree);

/// Gini-impurity CART trees on bootstrap samples, mtry candidate features
/// per split, grown until pure or a split would leave fewer than min_leaf
/// rows on a side. Equal gains resolve to the lowest feature index, then the
/// lowest threshold.
RandomForestModel train_random_forest(const Matrix& x, std::span<const int> y,
                                      const TrainConfig& config,
                                      SchemaTag schema = SchemaTag{});

std::size_t rf_positive_votes(const RandomForestModel& model, std::span<const double> x);
/// Fraction of trees voting positive. Throws SchemaMismatchError on width mismatch.
double rf_score(const RandomForestModel& model, std::span<const double> x);

}  // namespace laundergraph
