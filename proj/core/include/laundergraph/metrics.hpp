#pragma once

#include <span>
#include <vector>

namespace laundergraph {

/// (1 + b^2) P R / (b^2 P + R), defined as 0 when P = R = 0.
double f_beta(double precision, double recall, double beta);

struct RocPoint {
    double fpr = 0.0;
    double tpr = 0.0;
    double threshold = 0.0;  // scores >= threshold are called positive

    bool operator==(const RocPoint&) const = default;
};

struct RocCurve {
    std::vector<RocPoint> points;  // from (0, 0) at +inf to (1, 1)
    double auc = 0.0;
};

/// One point per distinct score (ties grouped), trapezoidal area. Labels are
/// 0/1; throws std::invalid_argument unless both classes are present.
RocCurve roc_auc(std::span<const double> scores, std::span<const int> labels);

struct ThresholdChoice {
    double beta = 1.0;
    double tau = 0.0;
    double f = 0.0;
    double precision = 0.0;
    double recall = 0.0;
};

/// Cutpoint maximizing F-beta over the distinct scores (positive iff
/// score >= tau); equal F resolves to the larger tau.
ThresholdChoice select_tau(std::span<const double> scores, std::span<const int> labels, double beta);

struct ThresholdReport {
    double auc = 0.0;
    std::vector<ThresholdChoice> per_beta;
};

ThresholdReport threshold_report(std::span<const double> scores, std::span<const int> labels,
                                 std::span<const double> betas);

}  // namespace laundergraph
