#include "laundergraph/standardizer.hpp"

#include <cmath>
#include <stdexcept>

namespace laundergraph {

Standardizer standardize_fit(const Matrix& x) {
    if (x.empty() || x.cols() == 0) throw std::invalid_argument("standardize_fit: empty matrix");
    const auto n = static_cast<double>(x.rows());
    Standardizer s;
    s.mean.assign(x.cols(), 0.0);
    s.stddev.assign(x.cols(), 0.0);
    for (std::size_t r = 0; r < x.rows(); ++r) {
        for (std::size_t c = 0; c < x.cols(); ++c) s.mean[c] += x(r, c);
    }
    for (auto& m : s.mean) m /= n;
    for (std::size_t r = 0; r < x.rows(); ++r) {
        for (std::size_t c = 0; c < x.cols(); ++c) {
            const double d = x(r, c) - s.mean[c];
            s.stddev[c] += d * d;
        }
    }
    for (auto& sd : s.stddev) sd = std::sqrt(sd / n);
    return s;
}

std::vector<double> Standardizer::apply(std::span<const double> x) const {
    if (x.size() != mean.size()) throw std::invalid_argument("standardizer: width mismatch");
    std::vector<double> out(x.size());
    for (std::size_t c = 0; c < x.size(); ++c) {
        out[c] = stddev[c] > 0.0 ? (x[c] - mean[c]) / stddev[c] : 0.0;
    }
    return out;
}

Matrix standardize_apply(const Standardizer& standardizer, const Matrix& x) {
    Matrix out(x.rows(), x.cols());
    for (std::size_t r = 0; r < x.rows(); ++r) {
        const auto z = standardizer.apply(x.row(r));
        std::copy(z.begin(), z.end(), out.row(r).begin());
    }
    return out;
}

}  // namespace laundergraph
