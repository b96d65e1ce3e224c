#include "laundergraph/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace laundergraph {

namespace {

struct Cut {
    double threshold;
    std::size_t tp;
    std::size_t fp;
};

// Cumulative counts at each distinct score, highest first, preceded by +inf.
std::vector<Cut> cutpoints(std::span<const double> scores, std::span<const int> labels, std::size_t& pos,
                           std::size_t& neg) {
    if (scores.size() != labels.size()) throw std::invalid_argument("scores and labels differ in length");
    pos = 0;
    neg = 0;
    for (int l : labels) {
        if (l == 1) ++pos;
        else if (l == 0) ++neg;
        else throw std::invalid_argument("labels must be 0 or 1");
    }
    if (pos == 0 || neg == 0) throw std::invalid_argument("both classes must be present");
    for (double s : scores) {
        if (std::isnan(s)) throw std::invalid_argument("score is NaN");
    }

    std::vector<std::size_t> order(scores.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return scores[a] > scores[b]; });

    std::vector<Cut> cuts{{std::numeric_limits<double>::infinity(), 0, 0}};
    std::size_t tp = 0;
    std::size_t fp = 0;
    for (std::size_t i = 0; i < order.size();) {
        const double s = scores[order[i]];
        for (; i < order.size() && scores[order[i]] == s; ++i) (labels[order[i]] == 1 ? tp : fp)++;
        cuts.push_back({s, tp, fp});
    }
    return cuts;
}

}  // namespace

double f_beta(double precision, double recall, double beta) {
    if (!(precision >= 0.0 && precision <= 1.0) || !(recall >= 0.0 && recall <= 1.0)) {
        throw std::invalid_argument("f_beta: precision and recall must lie in [0, 1]");
    }
    if (!(beta > 0.0)) throw std::invalid_argument("f_beta: beta must be positive");
    if (precision == 0.0 && recall == 0.0) return 0.0;
    const double b2 = beta * beta;
    return (1.0 + b2) * precision * recall / (b2 * precision + recall);
}

RocCurve roc_auc(std::span<const double> scores, std::span<const int> labels) {
    std::size_t pos = 0;
    std::size_t neg = 0;
    const auto cuts = cutpoints(scores, labels, pos, neg);
    RocCurve curve;
    curve.points.reserve(cuts.size());
    for (const auto& c : cuts) {
        curve.points.push_back({static_cast<double>(c.fp) / static_cast<double>(neg),
                                static_cast<double>(c.tp) / static_cast<double>(pos), c.threshold});
    }
    // Integrate in counts and normalize once to keep the sum exact for small n.
    double area = 0.0;
    for (std::size_t i = 1; i < cuts.size(); ++i) {
        area += static_cast<double>(cuts[i].fp - cuts[i - 1].fp) *
                static_cast<double>(cuts[i].tp + cuts[i - 1].tp) / 2.0;
    }
    curve.auc = area / (static_cast<double>(pos) * static_cast<double>(neg));
    return curve;
}

ThresholdChoice select_tau(std::span<const double> scores, std::span<const int> labels, double beta) {
    if (!(beta > 0.0)) throw std::invalid_argument("select_tau: beta must be positive");
    std::size_t pos = 0;
    std::size_t neg = 0;
    const auto cuts = cutpoints(scores, labels, pos, neg);
    const double b2 = beta * beta;

    // Cuts run from the largest tau down, so only a strictly better F moves
    // the choice and equal F keeps the larger tau.
    ThresholdChoice best;
    best.beta = beta;
    best.tau = cuts.front().threshold;
    bool have = false;
    for (const auto& c : cuts) {
        const double tp = static_cast<double>(c.tp);
        const double denom = (1.0 + b2) * tp + b2 * static_cast<double>(pos - c.tp) + static_cast<double>(c.fp);
        const double f = tp == 0.0 ? 0.0 : (1.0 + b2) * tp / denom;
        if (!have || f > best.f) {
            have = true;
            best.tau = c.threshold;
            best.f = f;
            best.precision = c.tp + c.fp == 0 ? 0.0 : tp / static_cast<double>(c.tp + c.fp);
            best.recall = tp / static_cast<double>(pos);
        }
    }
    return best;
}

ThresholdReport threshold_report(std::span<const double> scores, std::span<const int> labels,
                                 std::span<const double> betas) {
    ThresholdReport report;
    report.auc = roc_auc(scores, labels).auc;
    for (double b : betas) report.per_beta.push_back(select_tau(scores, labels, b));
    return report;
}

}  // namespace laundergraph
