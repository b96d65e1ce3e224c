#pragma once

#include <span>
#include <vector>

#include "laundergraph/matrix.hpp"

namespace laundergraph {

// Per-column mean and population standard deviation.
struct Standardizer {
    std::vector<double> mean;
    std::vector<double> stddev;

    /// Zero-variance columns map to 0.
    std::vector<double> apply(std::span<const double> x) const;

    bool operator==(const Standardizer&) const = default;
};

/// Throws std::invalid_argument on an empty matrix.
Standardizer standardize_fit(const Matrix& x);
Matrix standardize_apply(const Standardizer& standardizer, const Matrix& x);

}  // namespace laundergraph
