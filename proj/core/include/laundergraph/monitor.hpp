#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "laundergraph/classifier.hpp"
#include "laundergraph/community.hpp"
#include "laundergraph/features.hpp"
#include "laundergraph/graph.hpp"
#include "laundergraph/records.hpp"

namespace laundergraph {

struct MonitorOptions {
    ExtractionParams params;
    FeatureOptions features;
    double tau = 0.5;
    double theta = 0.5;
    std::size_t window_size = 1000;      // pending communities that force a flush
    std::int64_t window_seconds = 86400; // simulated time that forces a flush
};

struct Alert {
    std::string alert_id;
    Community community;
    double score = 0.0;       // highest score among the merged communities
    double tau = 0.0;
    std::string model_id;
    std::vector<PartyIndex> lineage;  // seeds of the merged communities
    std::int64_t timestamp = 0;       // latest constituent transaction
};

struct SkippedReport {
    std::string report_id;
    std::string reason;
};

/// Scores each incoming report's sender community against a trained model.
/// Suspicious communities wait in a merge window; when it closes, overlapping
/// ones are unioned and emitted as alerts.
class Monitor {
public:
    using Scorer = std::function<double(std::span<const double>)>;

    /// Throws SchemaMismatchError unless the model was trained on the
    /// standard feature schema.
    Monitor(const TransactionGraph& graph, const Classifier& model, MonitorOptions options);
    /// Uses an arbitrary scoring function over standard feature vectors.
    Monitor(const TransactionGraph& graph, Scorer scorer, std::string model_id, MonitorOptions options);

    /// Registers a party that later reports may reference.
    void add_party(const PartyRecord& party);
    /// Appends the report, scores the sender's community and returns any
    /// alerts released by a window that closed.
    std::vector<Alert> process(const ReportRecord& report);
    /// Closes the current window.
    std::vector<Alert> flush();

    const TransactionGraph& graph() const noexcept { return graph_; }
    const std::vector<SkippedReport>& skipped() const noexcept { return skipped_; }
    std::size_t processed() const noexcept { return processed_; }
    std::size_t pending() const noexcept { return pending_.size(); }

private:
    struct Pending {
        Community community;
        double score;
        std::int64_t timestamp;
    };

    MonitorOptions options_;
    Scorer scorer_;
    std::string model_id_;
    GraphBuilder builder_;
    TransactionGraph graph_;
    std::vector<Pending> pending_;
    std::int64_t window_start_ = 0;
    std::vector<SkippedReport> skipped_;
    std::size_t processed_ = 0;
    std::size_t alerts_emitted_ = 0;
};

/// alert_id, seed, members, score, tau, model_id, lineage, timestamp and the
/// report ids of the community's transactions, as one JSON object.
std::string to_json_line(const TransactionGraph& graph, const Alert& alert);

}  // namespace laundergraph
