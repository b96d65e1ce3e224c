#pragma once

#include <span>
#include <vector>

#include "laundergraph/matrix.hpp"
#include "laundergraph/standardizer.hpp"
#include "laundergraph/train_config.hpp"

namespace laundergraph {

struct LinearSvmModel {
    std::vector<double> weights;  // in standardized feature space
    double bias = 0.0;
    double c = 1.0;
    Standardizer standardizer;
    SchemaTag schema;

    bool operator==(const LinearSvmModel&) const = default;
};

// Per-epoch record of the optimizer state.
struct SvmTrace {
    std::vector<double> dual_objective;    // minimized by the solver; non-increasing
    std::vector<double> primal_objective;
    std::vector<double> duality_gap;
};

/// Soft-margin linear SVM minimizing
///
///   (1/n) * sum_i max(0, 1 - y_i (w.x_i + b)) + (1 / 2C) * (|w|^2 + b^2)
///
/// on standardized features, by dual coordinate descent. The bias is
/// regularized like an extra weight on a constant feature. Training stops
/// once the duality gap falls below config.tolerance (relative); otherwise
/// ConvergenceError reports the last objective change.
LinearSvmModel train_linear_svm(const Matrix& x, std::span<const int> y, const TrainConfig& config,
                                SchemaTag schema = SchemaTag{}, SvmTrace* trace = nullptr);

/// Signed decision value w.standardize(x) + b. Throws SchemaMismatchError on
/// width mismatch.
double svm_score(const LinearSvmModel& model, std::span<const double> x);

}  // namespace laundergraph
