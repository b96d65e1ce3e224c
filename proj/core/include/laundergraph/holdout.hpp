#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "laundergraph/matrix.hpp"
#include "laundergraph/metrics.hpp"
#include "laundergraph/train_config.hpp"

namespace laundergraph {

struct EvalConfig {
    int folds = 10;
    double train_fraction = 0.7;
    std::vector<double> betas{0.1, 0.5, 1.0};
    std::uint64_t seed = 1;
    unsigned workers = 1;  // folds evaluated concurrently

    void validate() const;
};

struct ModelSpec {
    std::string name;
    TrainConfig config;
};

struct ModelSummary {
    std::string name;
    ModelKind kind = ModelKind::random_forest;
    ThresholdReport mean;               // arithmetic mean over folds
    std::vector<ThresholdReport> folds;
    std::vector<RocCurve> roc;          // one curve per fold
};

struct EvalSummary {
    int fold_count = 0;
    std::vector<ModelSummary> models;
};

// Indices of one holdout iteration into the full dataset.
struct HoldoutSplit {
    std::vector<std::size_t> train;
    std::vector<std::size_t> eval;
};

/// All positives plus an equally sized uniform sample of negatives, split per
/// class so round(train_fraction * class size) rows of each class train.
HoldoutSplit holdout_split(std::span<const int> labels, const EvalConfig& config, int fold);

/// Balanced repeated holdout. Each fold trains every model on its split and
/// reports AUC and the F-beta optimal tau on the held-out rows. Throws
/// std::invalid_argument with fewer than two rows per class or fewer
/// negatives than positives.
EvalSummary repeated_holdout(const Matrix& x, std::span<const int> labels, std::span<const ModelSpec> models,
                             const EvalConfig& config);

}  // namespace laundergraph
