#include "laundergraph/linear_svm.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <sstream>
#include <string>

#include "laundergraph/error.hpp"

namespace laundergraph {

namespace {

double dot(std::span<const double> a, std::span<const double> b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

}  // namespace

// Dual coordinate descent in the style of LIBLINEAR's L1-loss solver. With
// an appended constant feature the problem is
//
//   min_w  1/2 |w|^2 + C' sum_i max(0, 1 - y_i w.x_i),   C' = C / n,
//
// which is the documented objective scaled by C. The dual is
//
//   min_a  1/2 a'Qa - sum_i a_i,   0 <= a_i <= C',
//
// and each coordinate step is an exact line minimization, so the dual value
// never increases.
LinearSvmModel train_linear_svm(const Matrix& x, std::span<const int> y, const TrainConfig& config,
                                SchemaTag schema, SvmTrace* trace) {
    config.validate();
    check_training_data(x, y);
    if (schema.width == 0) schema = SchemaTag::anonymous(x.cols());
    if (schema.width != x.cols()) throw SchemaMismatchError("linear svm: schema width differs from data");

    const auto order = canonical_row_order(x, y);
    LinearSvmModel model;
    model.c = config.c;
    model.schema = schema;
    model.standardizer = standardize_fit(x);

    const std::size_t n = x.rows();
    const std::size_t d = x.cols() + 1;
    Matrix z(n, d);
    std::vector<double> sign(n);
    std::vector<double> qii(n);
    for (std::size_t i = 0; i < n; ++i) {
        const auto row = model.standardizer.apply(x.row(order[i]));
        auto out = z.row(i);
        std::copy(row.begin(), row.end(), out.begin());
        out[d - 1] = 1.0;
        sign[i] = y[order[i]] == 1 ? 1.0 : -1.0;
        qii[i] = dot(out, out);
    }

    const double upper = config.c / static_cast<double>(n);
    std::vector<double> alpha(n, 0.0);
    std::vector<double> w(d, 0.0);
    std::vector<std::size_t> perm(n);
    std::iota(perm.begin(), perm.end(), std::size_t{0});
    std::mt19937_64 rng(config.seed);

    auto dual_value = [&] {
        return 0.5 * dot(w, w) - std::accumulate(alpha.begin(), alpha.end(), 0.0);
    };
    auto primal_value = [&] {
        double hinge = 0.0;
        for (std::size_t i = 0; i < n; ++i) hinge += std::max(0.0, 1.0 - sign[i] * dot(w, z.row(i)));
        return 0.5 * dot(w, w) + upper * hinge;
    };

    double previous = dual_value();
    double delta = 0.0;
    bool converged = false;
    for (int epoch = 0; epoch < config.max_epochs; ++epoch) {
        std::shuffle(perm.begin(), perm.end(), rng);
        for (std::size_t i : perm) {
            auto zi = z.row(i);
            const double g = sign[i] * dot(w, zi) - 1.0;
            const double next = std::clamp(alpha[i] - g / qii[i], 0.0, upper);
            const double step = next - alpha[i];
            if (step == 0.0) continue;
            alpha[i] = next;
            for (std::size_t j = 0; j < d; ++j) w[j] += step * sign[i] * zi[j];
        }
        const double dual = dual_value();
        const double primal = primal_value();
        const double gap = primal + dual;
        delta = previous - dual;
        previous = dual;
        if (trace) {
            trace->dual_objective.push_back(dual);
            trace->primal_objective.push_back(primal);
            trace->duality_gap.push_back(gap);
        }
        if (gap <= config.tolerance * std::max(1.0, std::abs(primal))) {
            converged = true;
            break;
        }
    }
    if (!converged) {
        std::ostringstream msg;
        msg << "linear svm did not converge within " << config.max_epochs
            << " epochs; final objective delta " << delta;
        throw ConvergenceError(msg.str(), delta);
    }

    model.weights.assign(w.begin(), w.end() - 1);
    model.bias = w.back();
    return model;
}

double svm_score(const LinearSvmModel& model, std::span<const double> x) {
    if (x.size() != model.schema.width || model.weights.size() != x.size()) {
        throw SchemaMismatchError("linear svm expects " + std::to_string(model.schema.width) + " features, got " +
                                  std::to_string(x.size()));
    }
    const auto z = model.standardizer.apply(x);
    return dot(model.weights, z) + model.bias;
}

}  // namespace laundergraph
