#include "laundergraph/train_config.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>
#include <string>

namespace laundergraph {

std::string_view to_string(ModelKind kind) {
    switch (kind) {
        case ModelKind::random_forest: return "random_forest";
        case ModelKind::linear_svm: return "linear_svm";
    }
    return "unknown";
}

ModelKind parse_model_kind(std::string_view name) {
    if (name == "rf" || name == "random_forest") return ModelKind::random_forest;
    if (name == "svm" || name == "linear_svm") return ModelKind::linear_svm;
    throw std::invalid_argument("unknown model kind '" + std::string(name) + "'");
}

void TrainConfig::validate() const {
    if (n_trees <= 0) throw std::invalid_argument("TrainConfig: n_trees must be positive");
    if (mtry < 0) throw std::invalid_argument("TrainConfig: mtry must be positive (0 selects the default)");
    if (min_leaf <= 0) throw std::invalid_argument("TrainConfig: min_leaf must be positive");
    if (!(c > 0.0)) throw std::invalid_argument("TrainConfig: C must be positive");
    if (max_epochs <= 0) throw std::invalid_argument("TrainConfig: max_epochs must be positive");
    if (!(tolerance > 0.0)) throw std::invalid_argument("TrainConfig: tolerance must be positive");
}

std::vector<std::size_t> canonical_row_order(const Matrix& x, std::span<const int> y) {
    std::vector<std::size_t> order(x.rows());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        auto ra = x.row(a);
        auto rb = x.row(b);
        if (auto c = std::lexicographical_compare_three_way(ra.begin(), ra.end(), rb.begin(), rb.end());
            c != 0) {
            return c < 0;
        }
        return y[a] < y[b];
    });
    return order;
}

void check_training_data(const Matrix& x, std::span<const int> y) {
    if (x.rows() != y.size()) throw std::invalid_argument("training data: label count differs from row count");
    if (x.rows() < 2) throw std::invalid_argument("training data: need at least two rows");
    if (x.cols() == 0) throw std::invalid_argument("training data: no features");
    bool pos = false;
    bool neg = false;
    for (int label : y) {
        if (label == 1) pos = true;
        else if (label == 0) neg = true;
        else throw std::invalid_argument("training data: labels must be 0 or 1");
    }
    if (!pos || !neg) throw std::invalid_argument("training data: both classes must be present");
}

}  // namespace laundergraph
