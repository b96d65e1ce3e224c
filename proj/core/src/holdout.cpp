#include "laundergraph/holdout.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

#include "laundergraph/classifier.hpp"
#include "laundergraph/parallel.hpp"

namespace laundergraph {

namespace {

ThresholdReport mean_report(const std::vector<ThresholdReport>& folds) {
    ThresholdReport mean = folds.front();
    const double k = static_cast<double>(folds.size());
    mean.auc = 0.0;
    for (auto& b : mean.per_beta) b.tau = b.f = b.precision = b.recall = 0.0;
    for (const auto& fold : folds) {
        mean.auc += fold.auc / k;
        for (std::size_t i = 0; i < fold.per_beta.size(); ++i) {
            mean.per_beta[i].tau += fold.per_beta[i].tau / k;
            mean.per_beta[i].f += fold.per_beta[i].f / k;
            mean.per_beta[i].precision += fold.per_beta[i].precision / k;
            mean.per_beta[i].recall += fold.per_beta[i].recall / k;
        }
    }
    return mean;
}

}  // namespace

void EvalConfig::validate() const {
    if (folds <= 0) throw std::invalid_argument("EvalConfig: folds must be positive");
    if (!(train_fraction > 0.0 && train_fraction < 1.0)) {
        throw std::invalid_argument("EvalConfig: train fraction must lie in (0, 1)");
    }
    if (betas.empty()) throw std::invalid_argument("EvalConfig: at least one beta is required");
    for (double b : betas) {
        if (!(b > 0.0)) throw std::invalid_argument("EvalConfig: betas must be positive");
    }
}

HoldoutSplit holdout_split(std::span<const int> labels, const EvalConfig& config, int fold) {
    std::vector<std::size_t> pos;
    std::vector<std::size_t> neg;
    for (std::size_t i = 0; i < labels.size(); ++i) (labels[i] == 1 ? pos : neg).push_back(i);
    if (pos.size() < 2 || neg.size() < 2) {
        throw std::invalid_argument("repeated holdout: need at least two rows of each class");
    }
    if (neg.size() < pos.size()) throw std::invalid_argument("repeated holdout: fewer negatives than positives");

    std::seed_seq seq{static_cast<std::uint32_t>(config.seed), static_cast<std::uint32_t>(config.seed >> 32),
                      static_cast<std::uint32_t>(fold)};
    std::mt19937_64 rng(seq);
    std::vector<std::size_t> sampled;
    std::sample(neg.begin(), neg.end(), std::back_inserter(sampled), pos.size(), rng);

    HoldoutSplit split;
    for (auto* group : {&pos, &sampled}) {
        std::shuffle(group->begin(), group->end(), rng);
        const auto n = group->size();
        auto train_n = static_cast<std::size_t>(std::lround(config.train_fraction * static_cast<double>(n)));
        train_n = std::clamp<std::size_t>(train_n, 1, n - 1);
        split.train.insert(split.train.end(), group->begin(), group->begin() + static_cast<std::ptrdiff_t>(train_n));
        split.eval.insert(split.eval.end(), group->begin() + static_cast<std::ptrdiff_t>(train_n), group->end());
    }
    std::sort(split.train.begin(), split.train.end());
    std::sort(split.eval.begin(), split.eval.end());
    return split;
}

EvalSummary repeated_holdout(const Matrix& x, std::span<const int> labels, std::span<const ModelSpec> models,
                             const EvalConfig& config) {
    config.validate();
    if (x.rows() != labels.size()) throw std::invalid_argument("repeated holdout: label count differs from rows");
    if (models.empty()) throw std::invalid_argument("repeated holdout: no models given");
    for (const auto& m : models) m.config.validate();
    // Surface precondition failures before any thread starts.
    holdout_split(labels, config, 0);

    const auto k = static_cast<std::size_t>(config.folds);
    std::vector<std::vector<ThresholdReport>> reports(models.size(), std::vector<ThresholdReport>(k));
    std::vector<std::vector<RocCurve>> curves(models.size(), std::vector<RocCurve>(k));

    parallel_for(k, config.workers, [&](std::size_t fold) {
        const auto split = holdout_split(labels, config, static_cast<int>(fold));
        const Matrix train_x = x.select(split.train);
        const Matrix eval_x = x.select(split.eval);
        std::vector<int> train_y;
        std::vector<int> eval_y;
        for (std::size_t i : split.train) train_y.push_back(labels[i]);
        for (std::size_t i : split.eval) eval_y.push_back(labels[i]);

        for (std::size_t m = 0; m < models.size(); ++m) {
            const Classifier model = train(train_x, train_y, models[m].config);
            std::vector<double> scores(eval_x.rows());
            for (std::size_t r = 0; r < eval_x.rows(); ++r) scores[r] = score(model, eval_x.row(r));
            reports[m][fold] = threshold_report(scores, eval_y, config.betas);
            curves[m][fold] = roc_auc(scores, eval_y);
        }
    });

    EvalSummary summary;
    summary.fold_count = config.folds;
    for (std::size_t m = 0; m < models.size(); ++m) {
        ModelSummary s;
        s.name = models[m].name;
        s.kind = models[m].config.kind;
        s.mean = mean_report(reports[m]);
        s.folds = std::move(reports[m]);
        s.roc = std::move(curves[m]);
        summary.models.push_back(std::move(s));
    }
    return summary;
}

}  // namespace laundergraph
