#pragma once

#include <string>

#include "laundergraph/holdout.hpp"

namespace laundergraph {

/// JSON document: per model the mean AUC, a per-beta table (tau, F-score,
/// recall, precision), the per-fold reports and every fold's ROC points.
std::string eval_report_json(const EvalSummary& summary);

/// Fixed-width table with columns model, AUC, beta, tau, F-score, recall,
/// precision.
std::string eval_report_table(const EvalSummary& summary);

}  // namespace laundergraph
