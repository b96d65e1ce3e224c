#include "laundergraph/eval_report.hpp"

#include <cmath>
#include <cstdio>

#include <nlohmann/json.hpp>

namespace laundergraph {

namespace {

using nlohmann::json;

json beta_rows(const ThresholdReport& report) {
    json rows = json::array();
    for (const auto& b : report.per_beta) {
        rows.push_back({{"beta", b.beta}, {"tau", b.tau}, {"f_score", b.f}, {"recall", b.recall},
                        {"precision", b.precision}});
    }
    return rows;
}

}  // namespace

std::string eval_report_json(const EvalSummary& summary) {
    json doc;
    doc["folds"] = summary.fold_count;
    doc["models"] = json::array();
    for (const auto& m : summary.models) {
        json model;
        model["model"] = m.name;
        model["kind"] = std::string(to_string(m.kind));
        model["auc"] = m.mean.auc;
        model["thresholds"] = beta_rows(m.mean);
        json folds = json::array();
        for (std::size_t f = 0; f < m.folds.size(); ++f) {
            json roc = json::array();
            for (const auto& p : m.roc[f].points) {
                // The leading +inf cutpoint has no JSON number; it is written as null.
                roc.push_back({{"fpr", p.fpr}, {"tpr", p.tpr},
                               {"threshold", std::isfinite(p.threshold) ? json(p.threshold) : json(nullptr)}});
            }
            folds.push_back({{"auc", m.folds[f].auc}, {"thresholds", beta_rows(m.folds[f])}, {"roc", roc}});
        }
        model["per_fold"] = std::move(folds);
        doc["models"].push_back(std::move(model));
    }
    return doc.dump(2) + "\n";
}

std::string eval_report_table(const EvalSummary& summary) {
    std::string out;
    char line[160];
    std::snprintf(line, sizeof line, "%-16s %6s %6s %8s %8s %8s %9s\n", "model", "AUC", "beta", "tau", "F-score",
                  "recall", "precision");
    out += line;
    for (const auto& m : summary.models) {
        bool first = true;
        for (const auto& b : m.mean.per_beta) {
            if (first) {
                std::snprintf(line, sizeof line, "%-16s %6.2f %6.2f %8.3f %8.2f %8.2f %9.2f\n", m.name.c_str(),
                              m.mean.auc, b.beta, b.tau, b.f, b.recall, b.precision);
            } else {
                std::snprintf(line, sizeof line, "%-16s %6s %6.2f %8.3f %8.2f %8.2f %9.2f\n", "", "", b.beta, b.tau,
                              b.f, b.recall, b.precision);
            }
            out += line;
            first = false;
        }
    }
    std::snprintf(line, sizeof line, "(means over %d folds)\n", summary.fold_count);
    out += line;
    return out;
}

}  // namespace laundergraph
