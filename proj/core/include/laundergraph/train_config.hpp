#pragma once

#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "laundergraph/features.hpp"
#include "laundergraph/matrix.hpp"

namespace laundergraph {

enum class ModelKind : std::uint8_t { random_forest = 0, linear_svm = 1 };

std::string_view to_string(ModelKind kind);
ModelKind parse_model_kind(std::string_view name);  // "rf"/"random_forest", "svm"/"linear_svm"

// Only the linear kernel is implemented; the field reserves room for others.
enum class SvmKernel : std::uint8_t { linear = 0 };

struct TrainConfig {
    ModelKind kind = ModelKind::random_forest;
    int n_trees = 100;
    int mtry = 0;  // 0 = floor(sqrt(#features))
    int min_leaf = 1;
    double c = 1.0;
    int max_epochs = 50000;
    double tolerance = 1e-12;  // relative duality gap that ends SVM training
    SvmKernel kernel = SvmKernel::linear;
    std::uint64_t seed = 1;
    unsigned workers = 1;

    void validate() const;
};

// Identifies the feature layout a model was trained on.
struct SchemaTag {
    std::uint32_t version = 0;
    std::uint64_t hash = 0;
    std::size_t width = 0;

    static SchemaTag of(const FeatureSchema& schema) {
        return {schema.version(), schema.hash(), schema.size()};
    }
    static SchemaTag anonymous(std::size_t width) { return {0, 0, width}; }

    bool operator==(const SchemaTag&) const = default;
};

/// Row permutation sorting (features, label) lexicographically. Training
/// works on this order so results do not depend on input row order.
std::vector<std::size_t> canonical_row_order(const Matrix& x, std::span<const int> y);

/// Throws std::invalid_argument unless y is 0/1, matches x, has >= 2 rows
/// and contains both classes.
void check_training_data(const Matrix& x, std::span<const int> y);

}  // namespace laundergraph
